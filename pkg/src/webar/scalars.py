"""Exact Gaussian-rational scalars.

Every coefficient in the engine is an element of Q(i): a pair of
arbitrary-precision rationals (real and imaginary part), kept in lowest
terms by the rational backend.  No floating point enters anywhere.

The rational backend is gmpy2.mpq when available (much faster on the big
verification suites), with fractions.Fraction as a drop-in fallback.
"""

from __future__ import annotations

from typing import Union

try:
    from gmpy2 import mpq as RAT  # type: ignore
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as RAT  # type: ignore

RatLike = Union[int, "RAT"]

_R0 = RAT(0)
_R1 = RAT(1)


def rat(value, den=None) -> RAT:
    """Build a backend rational from ints, strings or another rational."""
    if den is None:
        return RAT(value)
    return RAT(value, den)


class Scalar:
    """An element re + im*i of Q(i), immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", RAT(re))
        object.__setattr__(self, "im", RAT(im))

    def __setattr__(self, *_):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def _make(re, im) -> "Scalar":
        """Internal fast path: arguments are already backend rationals."""
        s = object.__new__(Scalar)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(q) -> "Scalar":
        return Scalar(q, 0)

    @staticmethod
    def i() -> "Scalar":
        return _I

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_one(self) -> bool:
        return self.re == _R1 and not self.im

    def is_rational(self) -> bool:
        return not self.im

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar._make(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar._make(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "Scalar":
        return Scalar._make(-self.re, -self.im)

    def __mul__(self, other: "Scalar") -> "Scalar":
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar._make(a * c, _R0)
        return Scalar._make(a * c - b * d, a * d + b * c)

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero Scalar")
        if not self.im:
            return Scalar._make(_R1 / self.re, _R0)
        n = self.re * self.re + self.im * self.im
        return Scalar._make(self.re / n, -self.im / n)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return self * other.inv()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inv() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def norm(self):
        """re^2 + im^2 as a backend rational."""
        return self.re * self.re + self.im * self.im

    # -- hashing / comparison --------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        if not self.im:
            return f"Scalar({self.re})"
        return f"Scalar({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


ZERO = Scalar(0)
ONE = Scalar(1)
_I = Scalar(0, 1)
