"""Closed formulas for the class and Betti numbers of M̄_{0,n}.

Two routes:

* the Stirling double sum ``(1-L)^(n-1) * sum_{k,j} s(k+n-1, k+n-1-j) S(k+n-1-j, k+1) L^(k+j)``,
  whose summation start points are settled against the strata oracle;
* the coefficient formula ``rk H^{2l} = sum_k (k+1)^(k+n-1)/(k+1)! * [x^(l-k)] exp(sum_i C_nki x^i)``,
  expanded as a sum over compositions of ``l-k``.

The coefficient formula is shipped in two readings.  ``"literal"`` counts the
``m = 0`` term as 1 for every ``k``.  ``"corrected"`` counts it only when
``l - k = 0``, i.e. the empty tuple is the only composition of zero and
nothing else has zero parts.  Only the corrected reading agrees with the
strata oracle; the literal one overshoots by
``sum_{k<l} (k+1)^(k+n-1)/(k+1)!``, which is 1 at ``l = 1`` and non-integral
from ``l = 3`` on.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Optional, Sequence, Tuple

from .errors import (
    AmbiguousConvention,
    DomainError,
    NegativeResult,
    NoConventionMatches,
    NonIntegralResult,
    TruncationCheckFailed,
)
from .exact import compositions, power_sum, stirling_first_signed, stirling_second
from .lpoly import BettiTable, LPolynomial, to_betti_table

METHODS = ("stirling", "cnki", "strata")
READINGS = ("corrected", "literal")
DEFAULT_VERIFY_MARGIN = 5


@dataclass(frozen=True)
class CnkiValue:
    n: int
    k: int
    i: int
    value: Fraction


@dataclass(frozen=True)
class StirlingConvention:
    k_start: int = 0
    j_start: int = 0
    verify_margin: int = DEFAULT_VERIFY_MARGIN

    def __post_init__(self):
        if self.k_start not in (0, 1) or self.j_start not in (0, 1):
            raise ValueError(f"summation starts must be 0 or 1: {self}")
        if self.verify_margin < 0:
            raise ValueError("verify_margin must be >= 0")

    def label(self) -> str:
        return f"k>={self.k_start},j>={self.j_start}"

    def as_dict(self) -> dict:
        return {"k_start": self.k_start, "j_start": self.j_start, "verify_margin": self.verify_margin}


# Resolved once at n_check=6, see resolve_convention.
DEFAULT_CONVENTION = StirlingConvention(0, 0)
ALL_CONVENTIONS = tuple(StirlingConvention(k, j) for k in (0, 1) for j in (0, 1))


_CNKI: Dict[Tuple[int, int, int], Fraction] = {}
_CNKI_LOCK = threading.Lock()


def cnki_value(n: int, k: int, i: int) -> Fraction:
    key = (n, k, i)
    v = _CNKI.get(key)
    if v is None:
        if n < 3 or k < 0 or i < 1:
            raise DomainError(f"C_nki needs n>=3, k>=0, i>=1; got {key}")
        sign = -1 if i % 2 else 1
        head = Fraction(sign * (2 * k * i + n * i + k + n - 1) + k - i, i * (i + 1))
        tail = Fraction(power_sum(k + n - 2, i), i * (k + 1) ** i)
        v = head - tail
        with _CNKI_LOCK:
            _CNKI[key] = v
    return v


def cnki(n: int, k: int, i: int) -> CnkiValue:
    return CnkiValue(n, k, i, cnki_value(n, k, i))


def main_term(n: int, l: int) -> Fraction:
    """``(l+1)^(l+n-1) / (l+1)!``."""
    if n < 3 or l < 0:
        raise DomainError(f"main term needs n>=3, l>=0; got n={n}, l={l}")
    return Fraction((l + 1) ** (l + n - 1), factorial(l + 1))


def composition_sum(n: int, k: int, t: int, m: int) -> Fraction:
    """Sum over compositions ``(i_1..i_m)`` of ``t`` of ``C_nk{i_1} ... C_nk{i_m}``."""
    total = Fraction(0)
    for comp in compositions(t, m):
        prod = Fraction(1)
        for i in comp:
            prod *= cnki_value(n, k, i)
        total += prod
    return total


def _exp_coefficients(n: int, k: int, t_max: int) -> list:
    """Coefficients of ``exp(sum_i C_nki x^i)`` up to ``x^t_max``.

    Equals ``sum_m 1/m! * composition_sum(n, k, t, m)`` at each ``t``, but built
    with the recurrence ``t a_t = sum_i i C_i a_{t-i}`` so large ``t`` stays cheap.
    """
    a = [Fraction(1)] + [Fraction(0)] * t_max
    for t in range(1, t_max + 1):
        acc = Fraction(0)
        for i in range(1, t + 1):
            acc += i * cnki_value(n, k, i) * a[t - i]
        a[t] = acc / t
    return a


def eq1_total(n: int, l: int, reading: str = "corrected", via: str = "compositions") -> Fraction:
    """Exact rational value of the coefficient formula at ``(n, l)``.

    ``via="compositions"`` walks k, then m, then every composition, as the
    formula is written.  ``via="series"`` uses the exponential recurrence
    instead (corrected reading only); both give identical rationals.
    """
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    if n < 3 or not 0 <= l <= n - 3:
        raise DomainError(f"need n >= 3 and 0 <= l <= n-3; got n={n}, l={l}")
    total = Fraction(0)
    for k in range(l + 1):
        t = l - k
        if via == "series":
            if reading != "corrected":
                raise ValueError("the series route only implements the corrected reading")
            inner = _exp_coefficients(n, k, t)[t]
        else:
            inner = Fraction(0)
            for m in range(t + 1):
                if m == 0:
                    term = Fraction(1) if (t == 0 or reading == "literal") else Fraction(0)
                else:
                    term = composition_sum(n, k, t, m)
                inner += term / factorial(m)
        total += main_term(n, k) * inner
    return total


def betti_via_cnki(n: int, l: int, reading: str = "corrected", via: str = "compositions") -> int:
    value = eq1_total(n, l, reading, via)
    if value.denominator != 1:
        raise NonIntegralResult(n, l, value)
    if value < 0:
        raise NegativeResult(n, l, value)
    return value.numerator


def stirling_series(n: int, conv: StirlingConvention, max_degree: int) -> LPolynomial:
    """Double sum truncated at total degree ``max_degree`` (before the ``(1-L)^(n-1)`` factor)."""
    coeffs = [0] * (max_degree + 1)
    for k in range(conv.k_start, max_degree + 1):
        top = k + n - 1
        for j in range(conv.j_start, max_degree - k + 1):
            coeffs[k + j] += stirling_first_signed(top, top - j) * stirling_second(top - j, k + 1)
    return LPolynomial(coeffs)


def _stirling_product(n: int, conv: StirlingConvention) -> LPolynomial:
    top = (n - 3) + conv.verify_margin
    series = stirling_series(n, conv, top)
    return (series * LPolynomial((1, -1)) ** (n - 1)).truncate(top)


def class_via_stirling(n: int, conv: StirlingConvention = DEFAULT_CONVENTION, validate: bool = True) -> LPolynomial:
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    prod = _stirling_product(n, conv)
    band = {d: prod[d] for d in range(n - 2, n - 2 + conv.verify_margin) if prod[d]}
    if band:
        raise TruncationCheckFailed(n, band)
    p = prod.truncate(n - 3)
    if validate:
        to_betti_table(p, n)
    return p


def _candidate_output(n: int, conv: StirlingConvention):
    try:
        return class_via_stirling(n, conv, validate=False)
    except TruncationCheckFailed as exc:
        return exc


def resolve_convention(
    n_check: int = 6,
    candidates: Optional[Sequence[StirlingConvention]] = None,
    verify_margin: int = DEFAULT_VERIFY_MARGIN,
) -> StirlingConvention:
    """Pick the summation starts whose output matches the strata oracle for ``3 <= n <= n_check``."""
    from .strata import class_via_strata

    if n_check < 5:
        raise DomainError("n_check must be >= 5")
    if candidates is None:
        candidates = [StirlingConvention(c.k_start, c.j_start, verify_margin) for c in ALL_CONVENTIONS]
    truth = {n: class_via_strata(n) for n in range(3, n_check + 1)}
    matches = []
    dump = {}
    for conv in candidates:
        outputs = {n: _candidate_output(n, conv) for n in truth}
        dump[conv.label()] = {n: str(v) for n, v in outputs.items()}
        if all(outputs[n] == truth[n] for n in truth):
            matches.append(conv)
    if not matches:
        raise NoConventionMatches(dump)
    if len(matches) > 1:
        raise AmbiguousConvention(matches)
    return matches[0]


def class_polynomial(n: int, method: str = "stirling", conv: StirlingConvention = DEFAULT_CONVENTION,
                     n_max_oracle: Optional[int] = None) -> LPolynomial:
    if method == "stirling":
        return class_via_stirling(n, conv)
    if method == "cnki":
        if n < 3:
            raise DomainError(f"n must be >= 3, got {n}")
        return LPolynomial(betti_via_cnki(n, l) for l in range(n - 2))
    if method == "strata":
        from .strata import N_MAX_ORACLE, class_via_strata

        return class_via_strata(n, N_MAX_ORACLE if n_max_oracle is None else n_max_oracle)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def betti_table(n: int, method: str = "stirling", conv: StirlingConvention = DEFAULT_CONVENTION,
                n_max_oracle: Optional[int] = None) -> BettiTable:
    return to_betti_table(class_polynomial(n, method, conv, n_max_oracle), n)
