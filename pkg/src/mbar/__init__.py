"""Exact Grothendieck classes and Betti numbers of the moduli spaces M̄_{0,n}."""
from .analysis import (
    asymptotic_scan,
    cnki_constant_probe,
    is_real_rooted,
    is_unimodal,
    proof_bound_checks,
    sturm_count,
    ulc_check,
)
from .exact import binomial, compositions, power_sum, stirling_first_signed, stirling_second
from .formulas import (
    StirlingConvention,
    betti_table,
    betti_via_cnki,
    class_via_stirling,
    cnki,
    main_term,
    resolve_convention,
)
from .lpoly import BettiTable, LPolynomial, to_betti_table
from .strata import class_via_strata, enumerate_laminar_families, stratum_count

__version__ = "0.1.0"

__all__ = [
    "BettiTable",
    "LPolynomial",
    "StirlingConvention",
    "asymptotic_scan",
    "betti_table",
    "betti_via_cnki",
    "binomial",
    "class_via_stirling",
    "class_via_strata",
    "cnki",
    "cnki_constant_probe",
    "compositions",
    "enumerate_laminar_families",
    "is_real_rooted",
    "is_unimodal",
    "main_term",
    "power_sum",
    "proof_bound_checks",
    "resolve_convention",
    "stirling_first_signed",
    "stirling_second",
    "stratum_count",
    "sturm_count",
    "to_betti_table",
    "ulc_check",
]
