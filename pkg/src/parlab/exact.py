"""Exact arithmetic in the quadratic field Q[sqrt(2)].

Elements are stored as a + b*sqrt(2) with arbitrary-precision rational
coefficients.  Everything is exact; no floating point is used anywhere
in the field operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


class NotRationalError(ArithmeticError):
    """Raised when a Q[sqrt(2)] value with a nonzero sqrt(2) part is
    forced into a plain rational."""


def _frac(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class QSqrt2:
    """An element a + b*sqrt(2) of Q[sqrt(2)]."""

    a: Fraction
    b: Fraction

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0) -> None:
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))

    # -- constructors -------------------------------------------------

    @classmethod
    def sqrt2(cls) -> QSqrt2:
        return cls(0, 1)

    @classmethod
    def of(cls, x: QSqrt2 | RationalLike) -> QSqrt2:
        if isinstance(x, QSqrt2):
            return x
        return cls(_frac(x))

    # -- accessors -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        """The value as a plain rational; requires a zero sqrt(2) part."""
        if self.b != 0:
            raise NotRationalError(f"{self} has a nonzero sqrt(2) coefficient")
        return self.a

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 2 ** 0.5

    # -- field operations ----------------------------------------------

    def __add__(self, other: QSqrt2 | RationalLike) -> QSqrt2:
        o = QSqrt2.of(other)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> QSqrt2:
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other: QSqrt2 | RationalLike) -> QSqrt2:
        return self + (-QSqrt2.of(other))

    def __rsub__(self, other: QSqrt2 | RationalLike) -> QSqrt2:
        return QSqrt2.of(other) - self

    def __mul__(self, other: QSqrt2 | RationalLike) -> QSqrt2:
        o = QSqrt2.of(other)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> QSqrt2:
        return QSqrt2(self.a, -self.b)

    def __truediv__(self, other: QSqrt2 | RationalLike) -> QSqrt2:
        o = QSqrt2.of(other)
        norm = o.a * o.a - 2 * o.b * o.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q[sqrt(2)]")
        num = self * o.conjugate()
        return QSqrt2(num.a / norm, num.b / norm)

    def __rtruediv__(self, other: QSqrt2 | RationalLike) -> QSqrt2:
        return QSqrt2.of(other) / self

    def __pow__(self, n: int) -> QSqrt2:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (QSqrt2(1) / self) ** (-n)
        # square-and-multiply keeps coefficient growth down for large n
        result = QSqrt2(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons ---------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(2)."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        if self.a > 0 and self.b > 0:
            return 1
        if self.a < 0 and self.b < 0:
            return -1
        # mixed signs: compare a^2 with 2 b^2 (equality impossible here
        # since sqrt(2) is irrational)
        bigger_rational = self.a * self.a > 2 * self.b * self.b
        if self.a > 0:
            return 1 if bigger_rational else -1
        return -1 if bigger_rational else 1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QSqrt2(other)
        if not isinstance(other, QSqrt2):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other: QSqrt2 | RationalLike) -> bool:
        return (self - QSqrt2.of(other)).sign() < 0

    def __le__(self, other: QSqrt2 | RationalLike) -> bool:
        return (self - QSqrt2.of(other)).sign() <= 0

    def __gt__(self, other: QSqrt2 | RationalLike) -> bool:
        return (self - QSqrt2.of(other)).sign() > 0

    def __ge__(self, other: QSqrt2 | RationalLike) -> bool:
        return (self - QSqrt2.of(other)).sign() >= 0

    def __abs__(self) -> QSqrt2:
        return -self if self.sign() < 0 else self

    def __repr__(self) -> str:
        if self.b == 0:
            return f"QSqrt2({self.a})"
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        root = "sqrt(2)" if self.b == 1 else f"{self.b}*sqrt(2)"
        if self.a == 0:
            return root
        return f"{self.a} + {root}"


SQRT2 = QSqrt2.sqrt2()
