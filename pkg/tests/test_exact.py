"""Field arithmetic in Q[sqrt(2)]."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from parlab.exact import NotRationalError, QSqrt2, SQRT2

fractions = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
)
elements = st.builds(QSqrt2, fractions, fractions)


@given(elements, elements, elements)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + QSqrt2(0) == x
    assert x * QSqrt2(1) == x
    assert x + (-x) == QSqrt2(0)


@given(elements)
def test_multiplicative_inverse(x):
    if x == QSqrt2(0):
        with pytest.raises(ZeroDivisionError):
            _ = QSqrt2(1) / x
    else:
        assert x * (QSqrt2(1) / x) == QSqrt2(1)


@given(elements, st.integers(min_value=0, max_value=12))
def test_pow_matches_repeated_multiplication(x, n):
    expected = QSqrt2(1)
    for _ in range(n):
        expected = expected * x
    assert x ** n == expected


def test_negative_powers():
    x = QSqrt2(1, 1)
    assert x ** -3 == QSqrt2(1) / x ** 3


@given(elements, elements)
def test_comparison_matches_float(x, y):
    # float is only a sanity reference; skip near-ties where it may be off
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-6:
        assert (x < y) == (fx < fy)


def test_sign_mixed_coefficients():
    assert QSqrt2(-1, 1).sign() == 1      # sqrt(2) > 1
    assert QSqrt2(3, -2).sign() == 1      # 3 > 2*sqrt(2)
    assert QSqrt2(Fraction(7, 5), -1).sign() == -1
    assert QSqrt2(0).sign() == 0


def test_rational_accessor():
    assert QSqrt2(Fraction(3, 4)).rational() == Fraction(3, 4)
    with pytest.raises(NotRationalError):
        SQRT2.rational()


def test_conjugate_cancellation():
    x = QSqrt2(1, 1) ** 5 + QSqrt2(1, -1) ** 5
    assert x.is_rational
    assert x.rational() == 82  # Lucas-like pair sum


def test_mixed_operand_types():
    assert 2 * SQRT2 == QSqrt2(0, 2)
    assert SQRT2 + 1 == QSqrt2(1, 1)
    assert 3 / (2 * SQRT2) == QSqrt2(0, Fraction(3, 4))
    assert SQRT2 * SQRT2 == QSqrt2(2)


def test_str():
    assert str(QSqrt2(Fraction(1, 2))) == "1/2"
    assert str(SQRT2) == "sqrt(2)"
    assert str(QSqrt2(1, 2)) == "1 + 2*sqrt(2)"
