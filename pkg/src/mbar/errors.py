"""Exception hierarchy.  Everything derives from :class:`MbarError`."""
from __future__ import annotations

from fractions import Fraction


class MbarError(Exception):
    pass


class DomainError(MbarError, ValueError):
    """An argument is outside the supported range."""


class RangeError(DomainError):
    """A scan point violates the ``l <= n / (10 ln n)`` window."""


class InvariantViolation(MbarError):
    """A computed table breaks degree, positivity, boundary or symmetry rules."""


class InternalError(MbarError):
    pass


class TruncationCheckFailed(MbarError):
    def __init__(self, n: int, band: dict):
        self.n = n
        self.band = band
        super().__init__(f"n={n}: nonzero coefficients past degree n-3: {band}")


class NoConventionMatches(MbarError):
    def __init__(self, candidates: dict):
        self.candidates = candidates
        lines = [f"  {conv}: {out}" for conv, out in candidates.items()]
        super().__init__("no summation convention matches the strata oracle:\n" + "\n".join(lines))


class AmbiguousConvention(MbarError):
    def __init__(self, matches: list):
        self.matches = matches
        super().__init__(f"several conventions match, raise n_check: {matches}")


class NonIntegralResult(MbarError):
    def __init__(self, n: int, l: int, value: Fraction):
        self.n, self.l, self.value = n, l, value
        super().__init__(f"betti sum for (n={n}, l={l}) is not an integer: {value}")


class NegativeResult(MbarError):
    def __init__(self, n: int, l: int, value: Fraction):
        self.n, self.l, self.value = n, l, value
        super().__init__(f"betti sum for (n={n}, l={l}) is negative: {value}")


class CacheError(MbarError):
    pass
