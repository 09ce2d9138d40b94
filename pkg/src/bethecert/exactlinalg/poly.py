"""Dense univariate polynomials over Q(i).

Coefficients are stored low degree first.  The variable is the spectral
parameter ``u`` everywhere in the package.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Sequence

from .scalars import ONE, ZERO, GaussQ, as_gq, format_scalar

__all__ = ["Poly", "poly_gcd", "poly_lcm"]


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_gq(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.coeffs,))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def linear(cls, root) -> "Poly":
        """The monic polynomial ``u - root``."""
        return cls([-as_gq(root), ONE])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = cls([ONE])
        for r in roots:
            out = out * cls.linear(r)
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> GaussQ:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, k: int) -> GaussQ:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_gq(other)
            return Poly([x * c for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly([ONE])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = other.lead().inverse()
        quo = [ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * inv_lead
            quo[k - dq] = q
            for j, oc in enumerate(other.coeffs):
                if oc:
                    rem[k - dq + j] = rem[k - dq + j] - q * oc
        return Poly(quo), Poly(rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.lead().inverse()

    def derivative(self) -> "Poly":
        return Poly([c * k for k, c in enumerate(self.coeffs) if k])

    def __call__(self, x):
        x = as_gq(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, s) -> "Poly":
        """The polynomial ``u -> p(u + s)``."""
        s = as_gq(s)
        if not s or self.degree < 1:
            return self
        out = [ZERO] * len(self.coeffs)
        spow = [ONE]
        for _ in range(len(self.coeffs)):
            spow.append(spow[-1] * s)
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            for j in range(k + 1):
                out[j] = out[j] + c * comb(k, j) * spow[k - j]
        return Poly(out)

    def reflect(self) -> "Poly":
        """The polynomial ``u -> p(-u)``."""
        return Poly([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({format_scalar(c)})*u^{k}" if k else f"({format_scalar(c)})")
        return "Poly(" + " + ".join(terms) + ")"

    def to_strings(self) -> list[str]:
        return [format_scalar(c) for c in self.coeffs]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm (exact over Q(i))."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_lcm(a: Poly, b: Poly) -> Poly:
    g = poly_gcd(a, b)
    return (a * b).exact_div(g).monic()


def poly_from_strings(cs: Sequence[str]) -> Poly:
    return Poly([as_gq(c) for c in cs])
