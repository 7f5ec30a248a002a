"""Exact Gaussian-rational scalars.

A ``CScalar`` is ``re + i*im`` with both parts arbitrary-precision rationals.
Parts are kept as ``int`` whenever they are integral (Python ints are much
faster than ``Fraction``), otherwise as a reduced ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, "CScalar"]


def _norm(v):
    if isinstance(v, int):
        if isinstance(v, bool):
            return int(v)
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, Rational):
        return _norm(Fraction(v.numerator, v.denominator))
    if isinstance(v, str):
        return _norm(Fraction(v))
    raise TypeError(f"exact rational expected, got {type(v).__name__}")


def _make(re, im):
    # fast path: parts already normalised
    s = object.__new__(CScalar)
    object.__setattr__(s, "re", re)
    object.__setattr__(s, "im", im)
    return s


def _pn(v):
    # normalise a result of int/Fraction arithmetic
    if type(v) is Fraction and v.denominator == 1:
        return v.numerator
    return v


class CScalar:
    """Immutable complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, CScalar):
            if im != 0:
                raise TypeError("cannot combine a CScalar real part with an imaginary part")
            re, im = re.re, re.im
        object.__setattr__(self, "re", _norm(re))
        object.__setattr__(self, "im", _norm(im))

    def __setattr__(self, name, value):
        raise AttributeError("CScalar is immutable")

    @staticmethod
    def coerce(v) -> "CScalar":
        if isinstance(v, CScalar):
            return v
        return _make(_norm(v), 0)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if type(other) is CScalar:
            return _make(_pn(self.re + other.re), _pn(self.im + other.im))
        if isinstance(other, (int, Fraction)):
            return _make(_pn(self.re + other), self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return _make(-self.re, -self.im)

    def __sub__(self, other):
        if type(other) is CScalar:
            return _make(_pn(self.re - other.re), _pn(self.im - other.im))
        if isinstance(other, (int, Fraction)):
            return _make(_pn(self.re - other), self.im)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if type(other) is CScalar:
            a, b, c, d = self.re, self.im, other.re, other.im
            if b == 0 and d == 0:
                return _make(_pn(a * c), 0)
            return _make(_pn(a * c - b * d), _pn(a * d + b * c))
        if isinstance(other, (int, Fraction)):
            if self.im == 0:
                return _make(_pn(self.re * other), 0)
            return _make(_pn(self.re * other), _pn(self.im * other))
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "CScalar":
        return _make(self.re, -self.im)

    def norm2(self):
        """|z|^2 as an exact rational."""
        return _pn(self.re * self.re + self.im * self.im)

    def inverse(self) -> "CScalar":
        d = self.norm2()
        if d == 0:
            raise ZeroDivisionError("division by zero CScalar")
        return _make(_pn(Fraction(self.re) / d), _pn(Fraction(-self.im) / d))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return _make(_pn(Fraction(self.re) / other), _pn(Fraction(self.im) / other))
        if type(other) is CScalar:
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return CScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if type(other) is CScalar:
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- conversions ------------------------------------------------------
    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __float__(self):
        if self.im != 0:
            raise TypeError(f"{self} is not real")
        return float(self.re)

    def real_fraction(self) -> Fraction:
        if self.im != 0:
            raise ValueError(f"{self} is not real")
        return Fraction(self.re)

    def parts(self) -> tuple[str, str]:
        """Exact ``("p/q", "p/q")`` strings for the real and imaginary parts."""
        return rational_str(self.re), rational_str(self.im)

    @classmethod
    def from_parts(cls, re: str, im: str = "0/1") -> "CScalar":
        return cls(Fraction(re), Fraction(im))

    def __repr__(self):
        return f"CScalar({self})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


def rational_str(v) -> str:
    """Render a rational as ``"p/q"`` (denominator always present)."""
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


ZERO = _make(0, 0)
ONE = _make(1, 0)
I = _make(0, 1)
