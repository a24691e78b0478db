"""Dense integer polynomials in the Lefschetz class L, and Betti tables."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .errors import InvariantViolation

Number = Union[int, Fraction]

__all__ = ["LPolynomial", "BettiTable", "L", "ONE", "ZERO", "to_betti_table"]


def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class LPolynomial:
    """Polynomial with integer coefficients, lowest degree first.

    Instances are immutable and always canonical: the stored tuple never ends
    in a zero, so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _trim(coeffs)
        for x in c:
            if not isinstance(x, int):
                raise TypeError(f"coefficients must be int, got {type(x).__name__}")
        self._c = c

    @classmethod
    def constant(cls, c: int) -> "LPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> "LPolynomial":
        return cls([0] * degree + [c])

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def __getitem__(self, d: int) -> int:
        return self._c[d] if 0 <= d < len(self._c) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LPolynomial.constant(other)
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"LPolynomial({list(self._c)})"

    def __str__(self) -> str:
        return render(self)

    @staticmethod
    def _coerce(x) -> "LPolynomial":
        if isinstance(x, LPolynomial):
            return x
        if isinstance(x, int):
            return LPolynomial.constant(x)
        raise TypeError(f"cannot combine LPolynomial with {type(x).__name__}")

    def __add__(self, other) -> "LPolynomial":
        q = self._coerce(other)
        a, b = self._c, q._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for d, x in enumerate(b):
            out[d] += x
        return LPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "LPolynomial":
        return LPolynomial(-x for x in self._c)

    def __sub__(self, other) -> "LPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LPolynomial":
        q = self._coerce(other)
        a, b = self._c, q._c
        if not a or not b:
            return LPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return LPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LPolynomial":
        if e < 0:
            raise ValueError("negative exponent")
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def truncate(self, max_degree: int) -> "LPolynomial":
        return LPolynomial(self._c[: max_degree + 1])

    def derivative(self) -> "LPolynomial":
        return LPolynomial(d * x for d, x in enumerate(self._c) if d)

    def __call__(self, x: Number) -> Number:
        return eval_rational(self, x)


def add(p: LPolynomial, q: LPolynomial) -> LPolynomial:
    return p + q


def sub(p: LPolynomial, q: LPolynomial) -> LPolynomial:
    return p - q


def mul(p: LPolynomial, q: LPolynomial) -> LPolynomial:
    return p * q


def pow(p: LPolynomial, e: int) -> LPolynomial:  # noqa: A001
    return p**e


def eval_rational(p: LPolynomial, x: Number) -> Number:
    """Horner evaluation; exact for ``int`` and ``Fraction`` arguments."""
    acc: Number = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def render(p: LPolynomial, var: str = "L") -> str:
    """Text form such as ``1 + 5*L + L^2``."""
    if p.is_zero():
        return "0"
    terms = []
    for d, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if d == 0:
            body = str(mag)
        else:
            mono = var if d == 1 else f"{var}^{d}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append((c < 0, body))
    neg, body = terms[0]
    out = ("-" if neg else "") + body
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


ZERO = LPolynomial()
ONE = LPolynomial((1,))
L = LPolynomial((0, 1))


@dataclass(frozen=True)
class BettiTable:
    """Even Betti numbers ``rk H^{2l}`` of M̄_{0,n} for ``l = 0 .. n-3``."""

    n: int
    ranks: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        validate_ranks(self.n, self.ranks)

    @classmethod
    def unchecked(cls, n: int, ranks: Sequence[int]) -> "BettiTable":
        """Build without validation, for inspecting suspect data."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "ranks", tuple(ranks))
        return obj

    @property
    def dimension(self) -> int:
        return self.n - 3

    def polynomial(self) -> LPolynomial:
        return LPolynomial(self.ranks)

    def __getitem__(self, l: int) -> int:
        return self.ranks[l]

    def __len__(self) -> int:
        return len(self.ranks)


def validate_ranks(n: int, ranks: Sequence[int]) -> None:
    if n < 3:
        raise InvariantViolation(f"n must be >= 3, got {n}")
    if len(ranks) != n - 2:
        raise InvariantViolation(f"n={n}: expected {n - 2} ranks, got {len(ranks)}")
    bad = [l for l, r in enumerate(ranks) if r <= 0]
    if bad:
        raise InvariantViolation(f"n={n}: nonpositive ranks at l={bad}")
    if ranks[0] != 1 or ranks[-1] != 1:
        raise InvariantViolation(f"n={n}: boundary ranks are {ranks[0]}, {ranks[-1]}, expected 1")
    asym = [l for l in range(len(ranks)) if ranks[l] != ranks[-1 - l]]
    if asym:
        raise InvariantViolation(f"n={n}: ranks not palindromic at l={asym}")


def to_betti_table(p: LPolynomial, n: int) -> BettiTable:
    if p.degree != n - 3:
        raise InvariantViolation(f"n={n}: class has degree {p.degree}, expected {n - 3}")
    return BettiTable(n, p.coeffs)
