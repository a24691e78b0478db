"""Checks on Betti tables and class polynomials.

Everything is exact: comparisons are done in ``Fraction`` and root counting
uses Sturm chains over the rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .errors import DomainError, RangeError
from .exact import binomial, count_compositions, power_sum
from .formulas import betti_via_cnki, class_polynomial, cnki_value, main_term
from .lpoly import BettiTable, LPolynomial

__all__ = [
    "UlcRecord",
    "UlcReport",
    "AsymptoticEntry",
    "AsymptoticReport",
    "ProbeReport",
    "is_unimodal",
    "is_log_concave",
    "normalized_ranks",
    "ulc_check",
    "sturm_chain",
    "sturm_count",
    "squarefree_part",
    "is_real_rooted",
    "main_term",
    "in_log_window",
    "asymptotic_scan",
    "cnki_constant_probe",
    "proof_bound_checks",
]


# --- sequences -------------------------------------------------------------


def is_unimodal(seq: Sequence) -> bool:
    """True iff ``seq`` weakly rises and then weakly falls."""
    if not seq:
        raise ValueError("empty sequence")
    i, n = 0, len(seq)
    while i + 1 < n and seq[i] <= seq[i + 1]:
        i += 1
    while i + 1 < n and seq[i] >= seq[i + 1]:
        i += 1
    return i == n - 1


def is_log_concave(seq: Sequence) -> bool:
    return all(seq[i] ** 2 >= seq[i - 1] * seq[i + 1] for i in range(1, len(seq) - 1))


def normalized_ranks(table: BettiTable) -> List[Fraction]:
    d = table.n - 3
    return [Fraction(r, binomial(d, l)) for l, r in enumerate(table.ranks)]


@dataclass(frozen=True)
class UlcRecord:
    l: int
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    def as_dict(self) -> dict:
        return {"l": self.l, "lhs": str(self.lhs), "rhs": str(self.rhs), "holds": self.holds}


@dataclass
class UlcReport:
    n: int
    per_l: List[UlcRecord]

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.per_l)

    @property
    def violations(self) -> List[UlcRecord]:
        return [r for r in self.per_l if not r.holds]

    def as_dict(self) -> dict:
        return {"n": self.n, "all_hold": self.all_hold, "per_l": [r.as_dict() for r in self.per_l]}


def ulc_check(table: BettiTable) -> UlcReport:
    """Compare ``(r[l-1]/C(d,l-1))^2`` with ``r[l-2] r[l] / (C(d,l-2) C(d,l))`` for ``2 <= l <= d``."""
    d = table.n - 3
    r = table.ranks
    records = []
    for l in range(2, d + 1):
        lhs = Fraction(r[l - 1], binomial(d, l - 1)) ** 2
        rhs = Fraction(r[l - 2] * r[l], binomial(d, l - 2) * binomial(d, l))
        records.append(UlcRecord(l, lhs, rhs))
    return UlcReport(table.n, records)


# --- real roots ------------------------------------------------------------

RationalPoly = List[Fraction]  # lowest degree first, no trailing zeros


def _trim(p: List) -> List:
    while p and p[-1] == 0:
        p.pop()
    return p


def _as_rational(p) -> RationalPoly:
    coeffs = p.coeffs if isinstance(p, LPolynomial) else p
    return _trim([Fraction(c) for c in coeffs])


def _primitive(p: RationalPoly) -> List[int]:
    """Positive rational multiple of ``p`` with coprime integer coefficients."""
    if not p:
        return []
    den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in p), 1)
    ints = [int(c * den) for c in p]
    g = reduce(gcd, ints, 0)
    return [c // g for c in ints]


def _divmod(a: RationalPoly, b: RationalPoly) -> Tuple[RationalPoly, RationalPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r.pop()
        _trim(r)
    return _trim(q), r


def _derivative(p: Sequence) -> List:
    return _trim([d * c for d, c in enumerate(p)][1:])


def _gcd(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    while b:
        _, r = _divmod(a, b)
        a, b = b, [Fraction(c) for c in _primitive(r)]
    return a


def squarefree_part(p: LPolynomial) -> LPolynomial:
    """``p / gcd(p, p')`` rescaled to a primitive integer polynomial with positive leading coefficient."""
    a = _as_rational(p)
    if not a:
        raise ValueError("zero polynomial")
    g = _gcd(a, _derivative(a))
    q, r = _divmod(a, g)
    assert not r
    prim = _primitive(q)
    if prim[-1] < 0:
        prim = [-c for c in prim]
    return LPolynomial(prim)


def sturm_chain(p: LPolynomial) -> List[List[int]]:
    """Sturm sequence of ``p``, each member rescaled by a positive constant."""
    a = _as_rational(p)
    if not a:
        raise ValueError("zero polynomial")
    chain = [_primitive(a)]
    b = _derivative(a)
    if b:
        chain.append(_primitive(b))
    while len(chain) >= 2:
        _, r = _divmod([Fraction(c) for c in chain[-2]], [Fraction(c) for c in chain[-1]])
        if not r:
            break
        chain.append(_primitive([-c for c in r]))
    return chain


def _sign_changes(signs: Iterable[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for x, y in zip(nz, nz[1:]) if x != y)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_count(p: LPolynomial) -> int:
    """Number of distinct real roots of ``p``."""
    chain = sturm_chain(p)
    at_pos = [_sign(q[-1]) for q in chain]
    at_neg = [_sign(q[-1]) * (-1) ** (len(q) - 1) for q in chain]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def sturm_count_interval(p: LPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in the half-open interval ``(lo, hi]``."""
    chain = sturm_chain(p)

    def var(x):
        return _sign_changes(_sign(LPolynomial(q)(x)) for q in chain)

    return var(lo) - var(hi)


def is_real_rooted(p: LPolynomial) -> bool:
    q = squarefree_part(p)
    return sturm_count(q) == q.degree


# --- refined asymptotic ------------------------------------------------------


def _e_bounds(terms: int) -> Tuple[Fraction, Fraction]:
    """Rational bounds ``lo < e < hi`` from the factorial series truncated at ``terms``."""
    lo, fact = Fraction(0), 1
    for j in range(terms + 1):
        if j:
            fact *= j
        lo += Fraction(1, fact)
    return lo, lo + Fraction(2, fact * (terms + 1))


def in_log_window(n: int, l: int) -> bool:
    """Exactly decide ``l <= n / (10 ln n)``, i.e. ``n^(10 l) <= e^n``.

    ``e`` is bracketed by rationals until the comparison is decided; equality
    cannot occur since ``e^n`` is irrational.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if l <= 0:
        return True
    target = n ** (10 * l)
    terms = 8
    while True:
        lo, hi = _e_bounds(terms)
        if target <= lo**n:
            return True
        if target >= hi**n:
            return False
        terms *= 2


@dataclass(frozen=True)
class AsymptoticEntry:
    n: int
    l: int
    rank: int
    ratio: Fraction

    @property
    def ratio_minus_one(self) -> Fraction:
        return abs(self.ratio - 1)

    @property
    def scaled(self) -> Fraction:
        return self.n**2 * self.ratio_minus_one

    @property
    def within_inverse_square(self) -> bool:
        return self.ratio_minus_one * self.n**2 <= 1

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "l": self.l,
            "rank": str(self.rank),
            "ratio": str(self.ratio),
            "ratio_minus_one": str(self.ratio_minus_one),
            "ratio_minus_one_float": float(self.ratio_minus_one),
            "scaled": str(self.scaled),
            "scaled_float": float(self.scaled),
            "in_log_window": in_log_window(self.n, self.l),
        }


@dataclass
class AsymptoticReport:
    entries: List[AsymptoticEntry]
    empirical_N: Optional[int]

    def as_dict(self) -> dict:
        return {"entries": [e.as_dict() for e in self.entries], "empirical_N": self.empirical_N}


def _rank(n: int, l: int, method: str) -> int:
    if method == "cnki":
        return betti_via_cnki(n, l)
    return class_polynomial(n, method)[l]


def asymptotic_scan(l: int, ns: Iterable[int], method: str = "cnki", check_range: bool = True) -> AsymptoticReport:
    """Exact ratio of ``rk H^{2l}`` to the main term along a grid of ``n``.

    With ``check_range`` every ``n`` must satisfy ``2 <= l <= n/(10 ln n)``;
    ``l = 0`` and ``l = 1`` are accepted too since the ratio is still defined.
    ``empirical_N`` is the least tested ``n`` from which every larger tested
    point has ``|ratio - 1| <= 1/n^2``.
    """
    ns = sorted(set(ns))
    if not ns:
        raise DomainError("empty n grid")
    for n in ns:
        if n < 3 or l > n - 3:
            raise RangeError(f"l={l} is outside 0..n-3 for n={n}")
        if check_range and not in_log_window(n, l):
            raise RangeError(f"l={l} exceeds n/(10 ln n) at n={n}")
    entries = []
    for n in ns:
        rank = _rank(n, l, method)
        entries.append(AsymptoticEntry(n, l, rank, rank / main_term(n, l)))
    empirical = None
    for e in reversed(entries):
        if not e.within_inverse_square:
            break
        empirical = e.n
    return AsymptoticReport(entries, empirical)


# --- proof constants ---------------------------------------------------------


@dataclass
class ProbeReport:
    sup_value: Fraction
    argmax: Tuple[int, int, int]
    grid: dict
    points: int = 0

    def as_dict(self) -> dict:
        return {
            "sup_value": str(self.sup_value),
            "sup_value_float": float(self.sup_value),
            "argmax": {"n": self.argmax[0], "k": self.argmax[1], "i": self.argmax[2]},
            "grid": self.grid,
            "points": self.points,
        }


def cnki_constant_probe(n_range: Iterable[int], k_rule: Callable[[int], int], i_max: int,
                        grid_label: Optional[dict] = None) -> ProbeReport:
    """Sup of ``|C_nki| / n^(i+1)`` over ``n in n_range, 0 <= k <= k_rule(n), 1 <= i <= i_max``."""
    best: Optional[Fraction] = None
    arg = (0, 0, 0)
    points = 0
    ns = list(n_range)
    for n in ns:
        for k in range(k_rule(n) + 1):
            for i in range(1, i_max + 1):
                v = abs(cnki_value(n, k, i)) / n ** (i + 1)
                points += 1
                if best is None or v > best:
                    best, arg = v, (n, k, i)
    if best is None:
        raise DomainError("empty probe grid")
    grid = grid_label or {"n": [min(ns), max(ns)], "i_max": i_max}
    return ProbeReport(best, arg, grid, points)


@dataclass
class BoundFailure:
    kind: str
    params: dict
    detail: str


def integral_bound_holds(k: int, n: int, i: int) -> bool:
    return power_sum(k + n - 2, i) <= Fraction((k + n - 1) ** (i + 1), i + 1)


def composition_bound_holds(t: int, m: int) -> bool:
    return count_compositions(t, m) <= 2 ** (t + m - 1) <= 4**t


def proof_bound_failures(i_range: Iterable[int], k_range: Iterable[int], n_range: Iterable[int],
                         t_max: int) -> List[BoundFailure]:
    failures = []
    i_range, k_range, n_range = list(i_range), list(k_range), list(n_range)
    for i in i_range:
        for k in k_range:
            for n in n_range:
                if not integral_bound_holds(k, n, i):
                    failures.append(BoundFailure("integral", {"k": k, "n": n, "i": i},
                                                 f"{power_sum(k + n - 2, i)} > {(k + n - 1) ** (i + 1)}/{i + 1}"))
    for t in range(1, t_max + 1):
        for m in range(1, t + 1):
            if not composition_bound_holds(t, m):
                failures.append(BoundFailure("composition", {"t": t, "m": m},
                                             f"C({t - 1},{m - 1})={binomial(t - 1, m - 1)}"))
    return failures


def proof_bound_checks(i_range: Iterable[int] = range(1, 11), k_range: Iterable[int] = range(0, 21),
                       n_range: Iterable[int] = range(4, 61), t_max: int = 20) -> bool:
    return not proof_bound_failures(i_range, k_range, n_range, t_max)
