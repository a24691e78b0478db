from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbar.errors import InvariantViolation
from mbar.lpoly import ONE, ZERO, BettiTable, L, LPolynomial, eval_rational, render, to_betti_table

coeff_lists = st.lists(st.integers(-10**6, 10**6), max_size=51)
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


def test_ring_examples():
    assert (1 + L) * (1 - L) == 1 - L**2
    p = LPolynomial([3, 0, -2])
    assert p + ZERO == p
    assert (1 - L) ** 3 == LPolynomial([1, -3, 3, -1])
    assert (1 - L) ** 2 == LPolynomial([1, -2, 1])
    assert p**0 == ONE
    assert eval_rational((1 - L) ** 3, 1) == 0


def test_canonical_form_and_degree():
    assert LPolynomial([1, 2, 0, 0]).coeffs == (1, 2)
    assert ZERO.degree == -1
    assert (L - L).is_zero()
    with pytest.raises(TypeError):
        LPolynomial([Fraction(1, 2)])


@given(coeff_lists, coeff_lists)
@settings(max_examples=100)
def test_operations_stay_canonical(a, b):
    p, q = LPolynomial(a), LPolynomial(b)
    for r in (p + q, p - q, p * q):
        assert not r.coeffs or r.coeffs[-1] != 0
    if not p.is_zero() and not q.is_zero():
        assert (p * q).degree == p.degree + q.degree


@pytest.mark.parametrize("coeffs,x,expected", [([1, 5, 1], 0, 1), ([1, 1], -1, 0), ([1, 5, 1], 1, 7)])
def test_eval(coeffs, x, expected):
    assert eval_rational(LPolynomial(coeffs), Fraction(x)) == expected


@given(coeff_lists, coeff_lists, st.lists(rationals, min_size=20, max_size=20))
@settings(max_examples=30)
def test_eval_is_ring_homomorphism(a, b, xs):
    p, q = LPolynomial(a), LPolynomial(b)
    for x in xs:
        assert eval_rational(p * q, x) == eval_rational(p, x) * eval_rational(q, x)
        assert eval_rational(p + q, x) == eval_rational(p, x) + eval_rational(q, x)


def test_render():
    assert render(LPolynomial([1, 5, 1])) == "1 + 5*L + L^2"
    assert render(ONE) == "1"
    assert render(ZERO) == "0"
    assert render(LPolynomial([6, -5, 1])) == "6 - 5*L + L^2"
    assert render(-L) == "-L"


@pytest.mark.parametrize("coeffs,n", [([1, 1], 4), ([1], 3), ([1, 5, 1], 5)])
def test_to_betti_table(coeffs, n):
    t = to_betti_table(LPolynomial(coeffs), n)
    assert list(t.ranks) == coeffs and t.n == n


@pytest.mark.parametrize(
    "coeffs,n",
    [
        ([1, 5, 2], 5),  # asymmetric
        ([1, 16, 17, 1], 6),  # corrupted middle
        ([1, 5, 1], 6),  # wrong degree
        ([2, 5, 2], 5),  # boundary not one
        ([1, -5, 1], 5),  # negative
    ],
)
def test_to_betti_table_rejects(coeffs, n):
    with pytest.raises(InvariantViolation):
        to_betti_table(LPolynomial(coeffs), n)


def test_unchecked_table_skips_validation():
    t = BettiTable.unchecked(5, [1, 2, 3])
    assert t.ranks == (1, 2, 3)
