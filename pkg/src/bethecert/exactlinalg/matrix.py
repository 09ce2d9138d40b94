"""Dense exact matrices over Q(i).

Entries are :class:`GaussQ`.  Matrices are treated as immutable values; the
row lists are never mutated after construction.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .poly import Poly, poly_gcd
from .scalars import ONE, ZERO, GaussQ, as_gq, format_scalar

__all__ = [
    "Matrix",
    "rank",
    "rref",
    "nullspace",
    "solve",
    "charpoly",
    "squarefree_charpoly_certificate",
    "commutator",
]


class Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence], rows: int | None = None, cols: int | None = None):
        grid = [[as_gq(x) for x in row] for row in data]
        r = len(grid) if rows is None else rows
        c = (len(grid[0]) if grid else 0) if cols is None else cols
        if len(grid) != r or any(len(row) != c for row in grid):
            raise ValueError("ragged or mis-sized matrix data")
        self.rows, self.cols, self.data = r, c, grid

    @classmethod
    def _wrap(cls, grid: list[list[GaussQ]], rows: int, cols: int) -> "Matrix":
        m = object.__new__(cls)
        m.rows, m.cols, m.data = rows, cols, grid
        return m

    def __reduce__(self):
        return (Matrix._wrap, (self.data, self.rows, self.cols))

    # constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls._wrap([[ZERO] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls.zeros(n)
        for i in range(n):
            m.data[i][i] = ONE
        return m

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "Matrix":
        """Matrix unit e_ij (0-based indices)."""
        m = cls.zeros(n)
        m.data[i][j] = ONE
        return m

    @classmethod
    def diag(cls, entries: Iterable) -> "Matrix":
        es = [as_gq(e) for e in entries]
        m = cls.zeros(len(es))
        for i, e in enumerate(es):
            m.data[i][i] = e
        return m

    @classmethod
    def scalar(cls, n: int, c) -> "Matrix":
        return cls.diag([c] * n)

    @classmethod
    def column(cls, v: Sequence) -> "Matrix":
        return cls([[x] for x in v])

    # basic access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def flat(self) -> list[GaussQ]:
        return [x for row in self.data for x in row]

    def is_zero(self) -> bool:
        return not any(x for row in self.data for x in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.flat())))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Matrix._wrap(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in subtraction")
        return Matrix._wrap(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._wrap([[-a for a in row] for row in self.data], self.rows, self.cols)

    def scale(self, c) -> "Matrix":
        c = as_gq(c)
        if not c:
            return Matrix.zeros(self.rows, self.cols)
        if c == ONE:
            return self
        return Matrix._wrap([[a * c for a in row] for row in self.data], self.rows, self.cols)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return self @ c
        return self.scale(c)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        # zero-skipping row-times-matrix; representation matrices are sparse
        ocols = other.cols
        odata = other.data
        orows_nz = [[(j, x) for j, x in enumerate(row) if x] for row in odata]
        out = []
        for row in self.data:
            acc = [ZERO] * ocols
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in orows_nz[k]:
                    acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix._wrap(out, self.rows, ocols)

    def apply(self, v: Sequence[GaussQ]) -> list[GaussQ]:
        out = []
        for row in self.data:
            acc = ZERO
            for a, x in zip(row, v):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out

    def __pow__(self, k: int) -> "Matrix":
        out = Matrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def transpose(self) -> "Matrix":
        return Matrix._wrap([list(col) for col in zip(*self.data)], self.cols, self.rows) if self.rows else Matrix.zeros(self.cols, 0)

    def conjugate(self) -> "Matrix":
        return Matrix._wrap([[a.conjugate() for a in row] for row in self.data], self.rows, self.cols)

    def adjoint(self) -> "Matrix":
        """Conjugate transpose."""
        return self.transpose().conjugate()

    def trace(self) -> GaussQ:
        acc = ZERO
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.data[i][i]
        return acc

    def kron(self, other: "Matrix") -> "Matrix":
        r, c = self.rows * other.rows, self.cols * other.cols
        out = [[ZERO] * c for _ in range(r)]
        for i, row in enumerate(self.data):
            for j, a in enumerate(row):
                if not a:
                    continue
                for k, orow in enumerate(other.data):
                    target = out[i * other.rows + k]
                    base = j * other.cols
                    for l, b in enumerate(orow):
                        if b:
                            target[base + l] = a * b
        return Matrix._wrap(out, r, c)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._wrap([row[c0:c1] for row in self.data[r0:r1]], r1 - r0, c1 - c0)

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) for x in row] for row in self.data], dtype=complex).reshape(self.rows, self.cols)

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(x) for x in row] for row in self.data]

    def __repr__(self):
        return f"Matrix({self.to_strings()!r})"


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


# Gaussian-integer helpers for fraction-free elimination --------------------

def _gi_rows(grid: Sequence[Sequence[GaussQ]]) -> list[list[tuple[int, int]]]:
    """Scale each row by the lcm of its denominators to land in Z[i]."""
    out = []
    for row in grid:
        den = 1
        for x in row:
            den = lcm(den, x.re.denominator, x.im.denominator)
        out.append([(int(x.re * den), int(x.im * den)) for x in row])
    return out


def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_exact_div(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    qr, rr = divmod(re, n)
    qi, ri = divmod(im, n)
    if rr or ri:
        raise ArithmeticError("Bareiss division was not exact")
    return (qr, qi)


def rank(m: Matrix | Sequence[Sequence[GaussQ]]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination over Z[i]."""
    grid = m.data if isinstance(m, Matrix) else m
    a = _gi_rows(grid)
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    prev = (1, 0)
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != (0, 0)), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, ncols):
                x = _gi_mul(p, row_i[j])
                y = _gi_mul(f, row_r[j])
                row_i[j] = _gi_exact_div((x[0] - y[0], x[1] - y[1]), prev)
            row_i[c] = (0, 0)
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (exact)."""
    a = [list(row) for row in m.data]
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return Matrix._wrap(a, nrows, ncols), pivots


def nullspace(m: Matrix) -> list[list[GaussQ]]:
    """Basis of {x : m x = 0}, one free variable set to 1 per vector."""
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red.data[r][f]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence[GaussQ]) -> list[GaussQ] | None:
    """One exact solution of m x = b, or None when inconsistent."""
    aug = Matrix._wrap([list(row) + [as_gq(x)] for row, x in zip(m.data, b)], m.rows, m.cols + 1)
    red, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [ZERO] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = red.data[r][m.cols]
    return x


def charpoly(m: Matrix) -> Poly:
    """det(u*1 - m) via Hessenberg reduction, exact."""
    if not m.is_square():
        raise ValueError("charpoly of a non-square matrix")
    n = m.rows
    h = [list(row) for row in m.data]
    for c in range(n - 2):
        piv = next((i for i in range(c + 1, n) if h[i][c]), None)
        if piv is None:
            continue
        if piv != c + 1:
            h[c + 1], h[piv] = h[piv], h[c + 1]
            for row in h:
                row[c + 1], row[piv] = row[piv], row[c + 1]
        inv = h[c + 1][c].inverse()
        for i in range(c + 2, n):
            f = h[i][c] * inv
            if not f:
                continue
            h[i] = [x - f * y for x, y in zip(h[i], h[c + 1])]
            for row in h:
                row[c + 1] = row[c + 1] + f * row[i]
    # recurrence on leading principal blocks of the upper Hessenberg form
    u = Poly([ZERO, ONE])
    p = [Poly([ONE])]
    for k in range(n):
        acc = (u - Poly.const(h[k][k])) * p[k]
        prod = ONE
        for i in range(k - 1, -1, -1):
            prod = prod * h[i + 1][i]
            if not prod:
                break
            acc = acc - p[i] * (h[i][k] * prod)
        p.append(acc)
    return p[n]


def squarefree_charpoly_certificate(m: Matrix) -> bool:
    """True iff gcd(charpoly, charpoly') is 1, i.e. dim-many distinct eigenvalues."""
    p = charpoly(m)
    if p.degree <= 0:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def random_gaussian_rational(rng, height: int = 97, complex_part: bool = True) -> GaussQ:
    """Small-height Gaussian rational with numerators and denominators bounded by ``height``."""
    re = Fraction(rng.randint(-height, height), rng.randint(1, height))
    im = Fraction(rng.randint(-height, height), rng.randint(1, height)) if complex_part else Fraction(0)
    return GaussQ(re, im)
