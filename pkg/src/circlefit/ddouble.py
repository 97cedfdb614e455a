"""Double-double arithmetic: a value stored as the unevaluated sum ``hi + lo``.

Gives about 106 bits (~32 decimal digits) using only float operations, via
the error-free transformations two_sum and two_prod (Dekker splitting, since
``math.fma`` is unavailable before Python 3.13).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> tuple[float, float]:
    """``s + e == a + b`` exactly, with ``s = fl(a + b)``."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """As :func:`two_sum`, valid when ``|a| >= |b|``."""
    s = a + b
    return s, b - (s - a)


def split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    """``p + e == a * b`` exactly, with ``p = fl(a * b)``."""
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


Number = Union["DD", float, int]


class DD:
    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        self.hi, self.lo = two_sum(float(hi), float(lo)) if lo else (float(hi), 0.0)

    @staticmethod
    def _raw(hi: float, lo: float) -> "DD":
        out = DD.__new__(DD)
        out.hi = hi
        out.lo = lo
        return out

    @classmethod
    def from_fraction(cls, q: Fraction) -> "DD":
        hi = float(q)
        lo = float(q - Fraction(hi))
        return cls(hi, lo)

    def to_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    def __float__(self) -> float:
        return self.hi + self.lo

    def __repr__(self) -> str:
        return f"DD({self.hi!r}, {self.lo!r})"

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: Number) -> "DD":
        if not isinstance(other, DD):
            s, e = two_sum(self.hi, float(other))
            e += self.lo
            return DD._raw(*quick_two_sum(s, e))
        s, e = two_sum(self.hi, other.hi)
        t, f = two_sum(self.lo, other.lo)
        e += t
        s, e = quick_two_sum(s, e)
        e += f
        return DD._raw(*quick_two_sum(s, e))

    __radd__ = __add__

    def __neg__(self) -> "DD":
        return DD._raw(-self.hi, -self.lo)

    def __sub__(self, other: Number) -> "DD":
        if isinstance(other, DD):
            return self + (-other)
        return self + (-float(other))

    def __rsub__(self, other: Number) -> "DD":
        return (-self) + other

    def __mul__(self, other: Number) -> "DD":
        if not isinstance(other, DD):
            b = float(other)
            p, e = two_prod(self.hi, b)
            e += self.lo * b
            return DD._raw(*quick_two_sum(p, e))
        p, e = two_prod(self.hi, other.hi)
        e += self.hi * other.lo + self.lo * other.hi
        return DD._raw(*quick_two_sum(p, e))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "DD":
        if not isinstance(other, DD):
            other = DD(float(other))
        if other.hi == 0.0:
            raise ZeroDivisionError("double-double division by zero")
        q1 = self.hi / other.hi
        r = self - other * q1
        q2 = r.hi / other.hi
        r = r - other * q2
        q3 = r.hi / other.hi
        q1, q2 = quick_two_sum(q1, q2)
        return DD._raw(q1, q2) + q3

    def __rtruediv__(self, other: Number) -> "DD":
        return DD(float(other)) / self

    def sqrt(self) -> "DD":
        if self.hi < 0:
            raise ValueError("square root of a negative double-double")
        if self.hi == 0.0:
            return DD()
        # one Newton correction from the double estimate (Karp's form), then
        # a second full double-double Newton step
        x = 1.0 / math.sqrt(self.hi)
        ax = self.hi * x
        y = DD(ax) + (self - DD(ax) * ax).hi * (x * 0.5)
        return y + (self - y * y) / (y * 2.0)

    def __abs__(self) -> "DD":
        return -self if self.hi < 0 else self

    # comparisons ------------------------------------------------------------

    def _key(self, other: Number) -> tuple:
        o = other if isinstance(other, DD) else DD(float(other))
        return (self.hi, self.lo), (o.hi, o.lo)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (DD, float, int)):
            return NotImplemented
        a, b = self._key(other)
        return a == b

    def __lt__(self, other: Number) -> bool:
        a, b = self._key(other)
        return a < b

    def __le__(self, other: Number) -> bool:
        a, b = self._key(other)
        return a <= b

    def __gt__(self, other: Number) -> bool:
        a, b = self._key(other)
        return a > b

    def __ge__(self, other: Number) -> bool:
        a, b = self._key(other)
        return a >= b

    def __hash__(self) -> int:
        return hash((self.hi, self.lo))


def dd_sum(values) -> DD:
    total = DD()
    for v in values:
        total = total + v
    return total


def dd_sqrt(x: Number) -> DD:
    return (x if isinstance(x, DD) else DD(float(x))).sqrt()


def dd_hypot(x: DD, y: DD) -> DD:
    return (x * x + y * y).sqrt()
