"""Rational operator-valued matrices in the spectral variable ``u``.

A :class:`RatOpMatrix` of size ``n`` acting on a ``d``-dimensional module is
``N(u) / q(u)`` where ``q`` is a monic scalar polynomial and ``N(u)`` is a
polynomial whose coefficients are ``(n*d) x (n*d)`` block matrices.  Block
``(i, j)`` of every coefficient is the operator part of the ``(i, j)`` entry,
so products of rational operator matrices are products of the big matrices:
in ``(A B)_{ij} = sum_k A_{ik} B_{kj}`` the operators of ``A`` act after those
of ``B``.  Size 1 is used for single operator-valued functions such as quantum
minors.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

from .matrix import Matrix, rref
from .poly import Poly, poly_gcd
from .scalars import ONE, ZERO, GaussQ, as_gq

__all__ = ["RatOpMatrix", "ratop_mul", "ratop_inverse", "RatOpInversionError"]


class RatOpInversionError(ArithmeticError):
    """Raised when a rational operator matrix is singular."""


# matrix-coefficient polynomials: list of equally sized Matrix, low degree first

def _mp_trim(cs: list[Matrix]) -> list[Matrix]:
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _mp_mul(a: Sequence[Matrix], b: Sequence[Matrix]) -> list[Matrix]:
    if not a or not b:
        return []
    size = a[0].rows
    out = [Matrix.zeros(size) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x @ y
    return _mp_trim(out)


def _mp_scale_poly(a: Sequence[Matrix], p: Poly) -> list[Matrix]:
    if not a or p.is_zero():
        return []
    size = a[0].rows
    out = [Matrix.zeros(size) for _ in range(len(a) + len(p.coeffs) - 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, c in enumerate(p.coeffs):
            if c:
                out[i + j] = out[i + j] + x.scale(c)
    return _mp_trim(out)


def _mp_add(a: Sequence[Matrix], b: Sequence[Matrix]) -> list[Matrix]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, x in enumerate(b):
        out[k] = out[k] + x
    return _mp_trim(out)


def _mp_substitute(a: Sequence[Matrix], sign: int, shift) -> list[Matrix]:
    """Coefficients of ``N(sign*u + shift)``."""
    if not a:
        return []
    shift = as_gq(shift)
    size = a[0].rows
    spow = [ONE]
    for _ in range(len(a)):
        spow.append(spow[-1] * shift)
    out = [Matrix.zeros(size) for _ in a]
    for k, x in enumerate(a):
        if x.is_zero():
            continue
        for j in range(k + 1):
            c = spow[k - j] * comb(k, j)
            if sign < 0 and j % 2:
                c = -c
            if c:
                out[j] = out[j] + x.scale(c)
    return _mp_trim(out)


def _mp_entry_polys(a: Sequence[Matrix]) -> dict[tuple[int, int], Poly]:
    """Nonzero scalar entry polynomials of a matrix-coefficient polynomial."""
    if not a:
        return {}
    size = a[0].rows
    acc: dict[tuple[int, int], list[GaussQ]] = {}
    for k, x in enumerate(a):
        for i, row in enumerate(x.data):
            for j, c in enumerate(row):
                if c:
                    acc.setdefault((i, j), [ZERO] * len(a))[k] = c
    return {ij: Poly(cs) for ij, cs in acc.items()}


def _mp_div_poly(a: Sequence[Matrix], g: Poly) -> list[Matrix]:
    if g.degree == 0:
        inv = g.lead().inverse()
        return [x.scale(inv) for x in a]
    size = a[0].rows
    entries = _mp_entry_polys(a)
    deg = len(a) - 1 - g.degree
    grids = [[[ZERO] * size for _ in range(size)] for _ in range(max(deg + 1, 0))]
    for (i, j), p in entries.items():
        q = p.exact_div(g)
        for k, c in enumerate(q.coeffs):
            grids[k][i][j] = c
    return _mp_trim([Matrix._wrap(gr, size, size) for gr in grids])


class RatOpMatrix:
    """``N(u)/q(u)`` with operator-valued matrix numerator and monic ``q``."""

    __slots__ = ("n", "d", "num", "den")

    def __init__(self, n: int, d: int, num: Sequence[Matrix], den: Poly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        num = _mp_trim(list(num))
        lead = den.lead()
        if lead != ONE:
            inv = lead.inverse()
            den = den * inv
            num = [x.scale(inv) for x in num]
        for x in num:
            if x.shape != (n * d, n * d):
                raise ValueError("numerator block has wrong size")
        self.n, self.d, self.num, self.den = n, d, num, den
        if reduce:
            self._reduce()

    def _reduce(self) -> None:
        if self.den.degree <= 0:
            return
        if not self.num:
            self.den = Poly([ONE])
            return
        entries = _mp_entry_polys(self.num)
        # a weighted combination gives a multiple of the true common gcd
        combo = Poly()
        for w, p in enumerate(entries.values(), start=1):
            combo = combo + p * w
        g = poly_gcd(self.den, combo)
        if g.degree > 0:
            for p in entries.values():
                if g.degree == 0:
                    break
                if not (p % g).is_zero():
                    g = poly_gcd(g, p)
        if g.degree > 0:
            self.num = _mp_div_poly(self.num, g)
            self.den = self.den.exact_div(g)

    # constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int, d: int) -> "RatOpMatrix":
        return cls(n, d, [Matrix.identity(n * d)], Poly([ONE]), reduce=False)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[Sequence[Matrix]]], den: Poly) -> "RatOpMatrix":
        """``blocks[k][i][j]`` is the u^k coefficient of numerator entry (i, j)."""
        n = len(blocks[0])
        d = blocks[0][0][0].rows
        num = []
        for coeff in blocks:
            grid = [[ZERO] * (n * d) for _ in range(n * d)]
            for i in range(n):
                for j in range(n):
                    op = coeff[i][j]
                    for a in range(d):
                        for b in range(d):
                            grid[i * d + a][j * d + b] = op.data[a][b]
            num.append(Matrix._wrap(grid, n * d, n * d))
        return cls(n, d, num, den)

    @classmethod
    def evaluation(cls, ops: Sequence[Sequence[Matrix]], z) -> "RatOpMatrix":
        """``1 + E/(u - z)`` where ``ops[i][j]`` is the operator of E_ij."""
        n = len(ops)
        d = ops[0][0].rows
        eye = [[Matrix.identity(d) if i == j else Matrix.zeros(d) for j in range(n)] for i in range(n)]
        const = [[ops[i][j] + eye[i][j].scale(-as_gq(z)) for j in range(n)] for i in range(n)]
        return cls.from_blocks([const, eye], Poly.linear(z))

    @classmethod
    def scalar_function(cls, d: int, num: Poly, den: Poly) -> "RatOpMatrix":
        """The scalar rational function ``num/den`` times the identity, size 1."""
        eye = Matrix.identity(d)
        return cls(1, d, [eye.scale(c) for c in num.coeffs], den)

    # structure ----------------------------------------------------------
    def __reduce__(self):
        return (RatOpMatrix, (self.n, self.d, self.num, self.den, False))

    @property
    def big_size(self) -> int:
        return self.n * self.d

    def num_coeff(self, k: int) -> Matrix:
        if 0 <= k < len(self.num):
            return self.num[k]
        return Matrix.zeros(self.big_size)

    def entry(self, i: int, j: int) -> "RatOpMatrix":
        """Entry (i, j) as a size-1 rational operator (0-based)."""
        d = self.d
        num = [x.block(i * d, (i + 1) * d, j * d, (j + 1) * d) for x in self.num]
        return RatOpMatrix(1, d, num, self.den)

    def operator(self) -> "RatOpMatrix":
        return self

    def __eq__(self, other):
        if not isinstance(other, RatOpMatrix):
            return NotImplemented
        if (self.n, self.d) != (other.n, other.d):
            return False
        # cross-multiplied comparison is independent of reduction
        lhs = _mp_scale_poly(self.num, other.den)
        rhs = _mp_scale_poly(other.num, self.den)
        return len(lhs) == len(rhs) and all(a == b for a, b in zip(lhs, rhs))

    __hash__ = None

    def is_identity(self) -> bool:
        return self == RatOpMatrix.identity(self.n, self.d)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "RatOpMatrix") -> "RatOpMatrix":
        self._check_compatible(other)
        g = poly_gcd(self.den, other.den)
        a_mult = other.den.exact_div(g)
        b_mult = self.den.exact_div(g)
        num = _mp_add(_mp_scale_poly(self.num, a_mult), _mp_scale_poly(other.num, b_mult))
        return RatOpMatrix(self.n, self.d, num, self.den * a_mult)

    def __neg__(self) -> "RatOpMatrix":
        return RatOpMatrix(self.n, self.d, [-x for x in self.num], self.den, reduce=False)

    def __sub__(self, other: "RatOpMatrix") -> "RatOpMatrix":
        return self + (-other)

    def scale(self, c) -> "RatOpMatrix":
        c = as_gq(c)
        return RatOpMatrix(self.n, self.d, [x.scale(c) for x in self.num], self.den, reduce=not c)

    def mul_poly(self, p: Poly) -> "RatOpMatrix":
        return RatOpMatrix(self.n, self.d, _mp_scale_poly(self.num, p), self.den)

    def div_poly(self, p: Poly) -> "RatOpMatrix":
        return RatOpMatrix(self.n, self.d, self.num, self.den * p)

    def substitute(self, sign: int = 1, shift=0) -> "RatOpMatrix":
        """``u -> sign*u + shift``."""
        if sign == 1 and not as_gq(shift):
            return self
        num = _mp_substitute(self.num, sign, shift)
        den = self.den.shift(shift)
        if sign < 0:
            den = den.reflect()
        return RatOpMatrix(self.n, self.d, num, den, reduce=False)

    def shifted(self, s) -> "RatOpMatrix":
        return self.substitute(1, s)

    def _check_compatible(self, other: "RatOpMatrix") -> None:
        if (self.n, self.d) != (other.n, other.d):
            raise ValueError(f"incompatible rational operator matrices {(self.n, self.d)} vs {(other.n, other.d)}")

    def conjugate_by(self, lift: Matrix, lift_inv: Matrix) -> "RatOpMatrix":
        """Apply ``X -> lift X lift_inv`` to every operator slot."""
        eye_n = Matrix.identity(self.n)
        big = eye_n.kron(lift)
        big_inv = eye_n.kron(lift_inv)
        return RatOpMatrix(self.n, lift.rows, [big @ x @ big_inv for x in self.num], self.den, reduce=False)

    def restrict(self, basis: Sequence[Sequence[GaussQ]]) -> "RatOpMatrix":
        """Restrict every operator to the span of ``basis`` (columns), which must be invariant."""
        from .spans import restrict_operator

        k = len(basis)
        n, d = self.n, self.d
        out = []
        for x in self.num:
            grid = [[ZERO] * (n * k) for _ in range(n * k)]
            for i in range(n):
                for j in range(n):
                    op = x.block(i * d, (i + 1) * d, j * d, (j + 1) * d)
                    r = restrict_operator(op, basis)
                    for a in range(k):
                        for b in range(k):
                            grid[i * k + a][j * k + b] = r.data[a][b]
            out.append(Matrix._wrap(grid, n * k, n * k))
        return RatOpMatrix(n, k, out, self.den)

    def lift_tensor(self, left_dim: int, right_dim: int) -> "RatOpMatrix":
        """Embed operators as ``1_left (x) X (x) 1_right`` on a tensor product."""
        d_new = left_dim * self.d * right_dim
        n, d = self.n, self.d
        eye_l, eye_r = Matrix.identity(left_dim), Matrix.identity(right_dim)
        out = []
        for x in self.num:
            grid = [[ZERO] * (n * d_new) for _ in range(n * d_new)]
            for i in range(n):
                for j in range(n):
                    op = x.block(i * d, (i + 1) * d, j * d, (j + 1) * d)
                    if op.is_zero():
                        continue
                    lifted = eye_l.kron(op).kron(eye_r)
                    for a, row in enumerate(lifted.data):
                        target = grid[i * d_new + a]
                        for b, c in enumerate(row):
                            if c:
                                target[j * d_new + b] = c
            out.append(Matrix._wrap(grid, n * d_new, n * d_new))
        return RatOpMatrix(n, d_new, out, self.den, reduce=False)

    # series -------------------------------------------------------------
    def series(self, order: int) -> list[Matrix]:
        """Big-matrix coefficients X_0..X_order of the expansion in u^{-1}."""
        m = self.den.degree
        if len(self.num) - 1 > m:
            raise ValueError("rational operator has a pole at infinity")
        q = self.den.coeffs
        xs: list[Matrix] = []
        for r in range(order + 1):
            acc = self.num_coeff(m - r) if m - r >= 0 else Matrix.zeros(self.big_size)
            for s in range(max(0, r - m), r):
                c = q[m - r + s]
                if c:
                    acc = acc - xs[s].scale(c)
            xs.append(acc)
        return xs

    def entry_series(self, i: int, j: int, order: int) -> list[Matrix]:
        d = self.d
        return [x.block(i * d, (i + 1) * d, j * d, (j + 1) * d) for x in self.series(order)]

    def evaluate(self, u0) -> Matrix:
        """Big matrix at a point where the denominator does not vanish."""
        u0 = as_gq(u0)
        q = self.den(u0)
        if not q:
            raise ZeroDivisionError("evaluation at a pole")
        acc = Matrix.zeros(self.big_size)
        for x in reversed(self.num):
            acc = acc.scale(u0) + x
        return acc.scale(q.inverse())

    def __repr__(self):
        return f"RatOpMatrix(n={self.n}, d={self.d}, deg_num={len(self.num) - 1}, den={self.den!r})"


def ratop_mul(a: RatOpMatrix, b: RatOpMatrix, shift=0) -> RatOpMatrix:
    """``a(u) * b(u + shift)``; operators of ``a`` act after those of ``b``."""
    a._check_compatible(b)
    bs = b.substitute(1, shift)
    return RatOpMatrix(a.n, a.d, _mp_mul(a.num, bs.num), a.den * bs.den)


def _minimal_polynomial(k: Matrix) -> Poly:
    """Monic minimal polynomial of ``k`` from the first linear dependency among its powers."""
    size = k.rows
    powers = [Matrix.identity(size)]
    while True:
        cand = powers[-1] @ k
        rows = [p.flat() for p in powers] + [cand.flat()]
        # solve sum c_i K^i = K^deg: columns are flattened powers
        system = Matrix._wrap([list(col) for col in zip(*rows)], size * size, len(rows))
        red, pivots = rref(system)
        if len(rows) - 1 not in pivots:
            deg = len(powers)
            coeffs = [ZERO] * (deg + 1)
            coeffs[deg] = ONE
            for r, pc in enumerate(pivots):
                coeffs[pc] = -red.data[r][deg]
            return Poly(coeffs)
        powers.append(cand)


def _pencil_inverse(a: RatOpMatrix) -> RatOpMatrix | None:
    """Inverse of ``q(u)^{-1} (A u + B)`` with A invertible, through the minimal polynomial."""
    if len(a.num) != 2:
        return None
    lead, const = a.num[1], a.num[0]
    lead_inv_rows = _matrix_inverse(lead)
    if lead_inv_rows is None:
        return None
    k = lead_inv_rows @ const
    p = _minimal_polynomial(k)
    size = k.rows
    # (uI + K)^{-1} = -h(K, -u) / p(-u) with p(x) - p(y) = (x - y) h(x, y)
    kpow = [Matrix.identity(size)]
    for _ in range(p.degree):
        kpow.append(kpow[-1] @ k)
    hcoef = [Matrix.zeros(size) for _ in range(max(p.degree, 1))]
    for i, c in enumerate(p.coeffs):
        if not c or i == 0:
            continue
        for b_exp in range(i):
            a_exp = i - 1 - b_exp
            hcoef[b_exp] = hcoef[b_exp] + kpow[a_exp].scale(c)
    # substitute y = -u and fold in -1, then multiply by q(u) and A^{-1}
    hnum = [x.scale(-1 if j % 2 == 0 else 1) for j, x in enumerate(hcoef)]
    hnum = [x @ lead_inv_rows for x in hnum]
    num = _mp_scale_poly(hnum, a.den)
    den = p.reflect()
    return RatOpMatrix(a.n, a.d, num, den)


def _matrix_inverse(m: Matrix) -> Matrix | None:
    size = m.rows
    aug = Matrix._wrap([list(row) + [ONE if i == j else ZERO for j in range(size)] for i, row in enumerate(m.data)], size, 2 * size)
    red, pivots = rref(aug)
    if pivots[:size] != list(range(size)) or len(pivots) < size:
        return None
    return red.block(0, size, size, 2 * size)


def _poly_matrix_inverse(rows: list[list[Poly]]) -> tuple[list[list[Poly]], Poly]:
    """Fraction-free Gauss-Jordan over Q(i)[u]: returns (M, det) with rows^{-1} = M/det."""
    size = len(rows)
    aug = [list(r) + [Poly([ONE]) if i == j else Poly() for j in range(size)] for i, r in enumerate(rows)]
    prev = Poly([ONE])
    for c in range(size):
        piv = next((i for i in range(c, size) if not aug[i][c].is_zero()), None)
        if piv is None:
            raise RatOpInversionError(
                f"the minor on rows/columns 1..{c + 1} vanishes identically for every row choice; "
                f"columns 1..{c + 1} are dependent"
            )
        if piv != c:
            aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        for i in range(size):
            if i == c:
                continue
            f = aug[i][c]
            aug[i] = [(p * x - f * y).exact_div(prev) for x, y in zip(aug[i], aug[c])]
        prev = p
    det = aug[size - 1][size - 1] if size else Poly([ONE])
    inv = [[aug[i][size + j] for j in range(size)] for i in range(size)]
    diag = [aug[i][i] for i in range(size)]
    for i in range(size):
        if diag[i] != det:
            raise ArithmeticError("fraction-free Gauss-Jordan lost its common scale")
    return inv, det


def ratop_inverse(a: RatOpMatrix) -> RatOpMatrix:
    """Exact inverse of a rational operator matrix.

    Linear pencils ``(A u + B)/q`` with invertible ``A`` (every evaluation
    factor) go through the minimal polynomial of ``A^{-1}B``; anything else is
    inverted by fraction-free elimination over Q(i)[u].
    """
    fast = _pencil_inverse(a)
    if fast is not None:
        return fast
    size = a.big_size
    if not a.num:
        raise RatOpInversionError("the zero matrix is not invertible (order-1 minor vanishes)")
    rows = [[Poly([a.num[k].data[i][j] for k in range(len(a.num))]) for j in range(size)] for i in range(size)]
    inv, det = _poly_matrix_inverse(rows)
    deg = max((p.degree for r in inv for p in r), default=0)
    num = []
    for k in range(deg + 1):
        num.append(Matrix._wrap([[p[k] for p in r] for r in inv], size, size))
    out = RatOpMatrix(a.n, a.d, num, det)
    return out.mul_poly(a.den)
