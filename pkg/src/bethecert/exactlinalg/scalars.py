"""Gaussian-rational scalars for the exact path.

A :class:`GaussQ` is ``re + im*i`` with ``re, im`` arbitrary-precision
:class:`fractions.Fraction`.  Values are immutable and hashable so they can
live in dict keys and frozen dataclasses.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from numbers import Rational

__all__ = ["GaussQ", "as_gq", "parse_scalar", "format_scalar", "pythagorean_unit", "ZERO", "ONE", "I"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


class GaussQ:
    """An element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussQ is immutable")

    def __reduce__(self):
        return (GaussQ, (self.re, self.im))

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "GaussQ":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussQ):
            if isinstance(other, (int, Fraction)):
                return GaussQ._make(self.re + other, self.im)
            return NotImplemented
        return GaussQ._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussQ):
            if isinstance(other, (int, Fraction)):
                return GaussQ._make(self.re - other, self.im)
            return NotImplemented
        return GaussQ._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussQ._make(other - self.re, -self.im)
        return NotImplemented

    def __neg__(self):
        return GaussQ._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, GaussQ):
            if isinstance(other, (int, Fraction)):
                return GaussQ._make(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            if not d:
                return GaussQ._make(a * c, d)
            return GaussQ._make(a * c, a * d)
        if not d:
            return GaussQ._make(a * c, b * c)
        return GaussQ._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussQ":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("GaussQ division by zero")
            return GaussQ._make(1 / a, b)
        n = a * a + b * b
        return GaussQ._make(a / n, -b / n)

    def __truediv__(self, other):
        if not isinstance(other, GaussQ):
            if isinstance(other, (int, Fraction)):
                if not other:
                    raise ZeroDivisionError("GaussQ division by zero")
                return GaussQ._make(self.re / other, self.im / other)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussQ":
        return GaussQ._make(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = GaussQ(0)
ONE = GaussQ(1)
I = GaussQ(0, 1)


def as_gq(x) -> GaussQ:
    """Coerce ints, Fractions, strings and GaussQ to GaussQ."""
    if isinstance(x, GaussQ):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, complex):
        raise TypeError("floats are not exact; pass Fractions or strings")
    return GaussQ(x)


_RAT = r"[+-]?\s*\d+(?:\s*/\s*\d+)?"
_IMAG_ONLY = _re.compile(r"^([+-]?\s*(?:\d+(?:\s*/\s*\d+)?)?)\s*\*?\s*i$")
_FULL = _re.compile(rf"^({_RAT})\s*([+-])\s*(\d+(?:\s*/\s*\d+)?)?\s*\*?\s*i$")


def _parse_rat(s: str) -> Fraction:
    return Fraction(s.replace(" ", ""))


def parse_scalar(text: str) -> GaussQ:
    """Parse ``"p/q"``, ``"p/q i"``, ``"p/q+r/s i"`` (spaces optional).

    >>> parse_scalar("1/2-3/4 i")
    GaussQ('1/2-3/4 i')
    """
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    m = _FULL.match(s)
    if m:
        re_part = _parse_rat(m.group(1))
        mag = _parse_rat(m.group(3)) if m.group(3) else Fraction(1)
        return GaussQ(re_part, mag if m.group(2) == "+" else -mag)
    m = _IMAG_ONLY.match(s)
    if m:
        g = m.group(1).replace(" ", "")
        if g in ("", "+", "-"):
            coeff = Fraction(-1 if g == "-" else 1)
        else:
            coeff = _parse_rat(g)
        return GaussQ(0, coeff)
    try:
        return GaussQ(_parse_rat(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed exact scalar {text!r}") from exc


def format_scalar(x: GaussQ) -> str:
    """Inverse of :func:`parse_scalar`; canonical so reports are stable."""
    x = as_gq(x)
    if not x.im:
        return str(x.re)
    im_abs = abs(x.im)
    mag = "" if im_abs == 1 else str(im_abs) + " "
    if not x.re:
        return ("-" if x.im < 0 else "") + mag + "i"
    return f"{x.re}{'-' if x.im < 0 else '+'}{mag}i"


def pythagorean_unit(t) -> GaussQ:
    """Exact point on the unit circle: ((1-t^2) + 2it)/(1+t^2)."""
    t = _frac(t)
    d = 1 + t * t
    return GaussQ((1 - t * t) / d, 2 * t / d)
