"""gl_m irreducibles in the rational Gelfand-Tsetlin basis.

Basis vectors are Gelfand-Tsetlin patterns.  The simple generators act by the
classical rational formulas with ``l_{k,i} = lambda_{k,i} - i + 1``; every
other ``E_ij`` is an iterated commutator.  Unitarity is recovered through a
separately solved invariant Hermitian form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .exactlinalg import ONE, ZERO, GaussQ, Matrix, nullspace

__all__ = [
    "Weight",
    "GTPattern",
    "Irrep",
    "GramForm",
    "enumerate_gt_patterns",
    "build_irrep",
    "gram_form",
    "highest_weight_subspace",
    "trivial_irrep",
]


@dataclass(frozen=True)
class Weight:
    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int]):
        es = tuple(int(x) for x in entries)
        if any(a < b for a, b in zip(es, es[1:])):
            raise ValueError(f"weight {es} is not dominant (must be weakly decreasing)")
        object.__setattr__(self, "entries", es)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.entries) + ")"


GTPattern = tuple[tuple[int, ...], ...]
"""Rows from the top (length m) down to the bottom (length 1)."""


def _check_interlacing(p: GTPattern) -> bool:
    for upper, lower in zip(p, p[1:]):
        for i, x in enumerate(lower):
            if not (upper[i] >= x >= upper[i + 1]):
                return False
    return True


def enumerate_gt_patterns(lam: Weight | Sequence[int]) -> list[GTPattern]:
    """All interlacing patterns with top row ``lam``, reverse lexicographic (highest vector first)."""
    top = tuple(Weight(lam).entries)
    if not top:
        return [()]

    def below(row: tuple[int, ...]) -> list[tuple[int, ...]]:
        ranges = [range(row[i + 1], row[i] + 1) for i in range(len(row) - 1)]
        return [tuple(c) for c in product(*ranges)]

    out: list[GTPattern] = []

    def rec(prefix: list[tuple[int, ...]]):
        row = prefix[-1]
        if len(row) == 1:
            out.append(tuple(prefix))
            return
        for nxt in below(row):
            rec(prefix + [nxt])

    rec([top])
    out.sort(reverse=True)
    return out


def _row(p: GTPattern, k: int) -> tuple[int, ...]:
    """Row of length k (1-based)."""
    return p[len(p) - k]


def _replace(p: GTPattern, k: int, i: int, delta: int) -> GTPattern:
    idx = len(p) - k
    row = list(p[idx])
    row[i] += delta
    out = list(p)
    out[idx] = tuple(row)
    return tuple(out)


@dataclass
class Irrep:
    m: int
    highest: Weight
    dim: int
    generators: dict[tuple[int, int], Matrix]
    basis_labels: list[GTPattern]

    def E(self, i: int, j: int) -> Matrix:
        """rho(E_ij), 1-based."""
        return self.generators[(i, j)]

    def ops(self) -> list[list[Matrix]]:
        """0-based grid ``ops[i][j] = rho(E_{i+1,j+1})``."""
        return [[self.generators[(i + 1, j + 1)] for j in range(self.m)] for i in range(self.m)]

    def highest_index(self) -> int:
        top = self.highest.entries
        hv = tuple(top[: self.m - r] for r in range(self.m))
        return self.basis_labels.index(hv)

    def weight_of(self, idx: int) -> tuple[int, ...]:
        p = self.basis_labels[idx]
        sums = [sum(_row(p, k)) for k in range(1, self.m + 1)]
        return tuple(sums[k] - (sums[k - 1] if k else 0) for k in range(self.m))


def _frac_matrix(entries: dict[tuple[int, int], Fraction], d: int) -> Matrix:
    grid = [[ZERO] * d for _ in range(d)]
    for (a, b), x in entries.items():
        grid[a][b] = GaussQ(x)
    return Matrix._wrap(grid, d, d)


@lru_cache(maxsize=None)
def _build(top: tuple[int, ...]) -> Irrep:
    m = len(top)
    pats = enumerate_gt_patterns(top)
    index = {p: a for a, p in enumerate(pats)}
    d = len(pats)
    gens: dict[tuple[int, int], Matrix] = {}
    for k in range(1, m + 1):
        diag = {}
        for a, p in enumerate(pats):
            w = sum(_row(p, k)) - (sum(_row(p, k - 1)) if k > 1 else 0)
            if w:
                diag[(a, a)] = Fraction(w)
        gens[(k, k)] = _frac_matrix(diag, d)
    for k in range(1, m):
        up: dict[tuple[int, int], Fraction] = {}
        down: dict[tuple[int, int], Fraction] = {}
        for a, p in enumerate(pats):
            lk = [x - i for i, x in enumerate(_row(p, k))]
            lk1 = [x - i for i, x in enumerate(_row(p, k + 1))]
            lkm = [x - i for i, x in enumerate(_row(p, k - 1))] if k > 1 else []
            for i in range(k):
                den = Fraction(1)
                for j in range(k):
                    if j != i:
                        den *= lk[i] - lk[j]
                q = _replace(p, k, i, 1)
                if q in index:
                    num = Fraction(1)
                    for x in lk1:
                        num *= lk[i] - x
                    up[(index[q], a)] = -num / den
                q = _replace(p, k, i, -1)
                if q in index:
                    num = Fraction(1)
                    for x in lkm:
                        num *= lk[i] - x
                    down[(index[q], a)] = num / den
        gens[(k, k + 1)] = _frac_matrix({ij: x for ij, x in up.items() if x}, d)
        gens[(k + 1, k)] = _frac_matrix({ij: x for ij, x in down.items() if x}, d)
    for gap in range(2, m):
        for i in range(1, m - gap + 1):
            j = i + gap
            a, b = gens[(i, j - 1)], gens[(j - 1, j)]
            gens[(i, j)] = a @ b - b @ a
            a, b = gens[(j, j - 1)], gens[(j - 1, i)]
            gens[(j, i)] = a @ b - b @ a
    return Irrep(m, Weight(top), d, gens, pats)


def build_irrep(lam: Weight | Sequence[int]) -> Irrep:
    """The irreducible of highest weight ``lam`` with exact GT matrices (cached)."""
    return _build(tuple(Weight(lam).entries))


def trivial_irrep(m: int) -> Irrep:
    return build_irrep([0] * m)


@dataclass
class GramForm:
    matrix: Matrix

    def adjoint(self, x: Matrix) -> Matrix:
        """The adjoint ``G^{-1} x^* G`` with respect to the form."""
        g = self.matrix
        ginv = _diag_inverse(g) if _is_diagonal(g) else _general_inverse(g)
        return ginv @ x.adjoint() @ g

    def tensor(self, other: "GramForm") -> "GramForm":
        return GramForm(self.matrix.kron(other.matrix))


def _is_diagonal(g: Matrix) -> bool:
    return all(not g.data[i][j] for i in range(g.rows) for j in range(g.cols) if i != j)


def _diag_inverse(g: Matrix) -> Matrix:
    return Matrix.diag([g.data[i][i].inverse() for i in range(g.rows)])


def _general_inverse(g: Matrix) -> Matrix:
    from .exactlinalg.ratop import _matrix_inverse

    inv = _matrix_inverse(g)
    if inv is None:
        raise ValueError("Gram matrix is singular")
    return inv


def leading_minors_positive(g: Matrix) -> bool:
    """Exact Sylvester test on a Hermitian matrix."""
    from .exactlinalg import charpoly

    n = g.rows
    for k in range(1, n + 1):
        det = charpoly(g.block(0, k, 0, k))[0] * (-1) ** k
        if det.im or det.re <= 0:
            return False
    return True


def gram_form(rep: Irrep) -> GramForm:
    """Positive-definite invariant form with the highest vector of norm 1.

    GT vectors are joint eigenvectors of real-diagonal self-adjoint
    operators, so the form is diagonal; the diagonal is solved exactly from
    ``G E_{k,k+1} = E_{k+1,k}^* G`` and then verified against all generators.
    """
    d, m = rep.dim, rep.m
    rows = []
    for k in range(1, m):
        up, down = rep.E(k, k + 1), rep.E(k + 1, k)
        for a in range(d):
            for b in range(d):
                x, y = up.data[a][b], down.data[b][a].conjugate()
                if x or y:
                    r = [ZERO] * d
                    r[a] = r[a] + x
                    r[b] = r[b] - y
                    rows.append(r)
    if rows:
        sols = nullspace(Matrix(rows))
    else:
        sols = [[ONE if i == j else ZERO for i in range(d)] for j in range(d)]
    if len(sols) != 1:
        raise ValueError(f"invariant form is not unique up to scale (solution space of dim {len(sols)})")
    g = sols[0]
    h = rep.highest_index()
    if not g[h]:
        raise ValueError("invariant form vanishes on the highest vector")
    scale = g[h].inverse()
    g = [x * scale for x in g]
    if any(x.im or x.re <= 0 for x in g):
        raise ValueError("no positive-definite invariant form (non-unitarizable input)")
    G = Matrix.diag(g)
    for (i, j), e in rep.generators.items():
        if G @ e != rep.E(j, i).adjoint() @ G:
            raise ValueError(f"form fails invariance for E_{i}{j}")
    return GramForm(G)


def highest_weight_subspace(rep: Irrep, mu: Weight | Sequence[int]) -> list[list[GaussQ]]:
    """Basis of gl_k-highest vectors of weight mu for the lower-right gl_k."""
    mu = Weight(mu)
    k = mu.rank
    n = rep.m - k
    if n < 0:
        raise ValueError("gl_k does not fit inside the representation's rank")
    coords = [a for a in range(rep.dim) if rep.weight_of(a)[n:] == mu.entries]
    if not coords:
        return []
    rows = []
    for i in range(1, k):
        e = rep.E(n + i, n + i + 1)
        for r in range(rep.dim):
            row = [e.data[r][a] for a in coords]
            if any(row):
                rows.append(row)
    if rows:
        sol = nullspace(Matrix(rows))
    else:
        sol = [[ONE if i == j else ZERO for i in range(len(coords))] for j in range(len(coords))]
    out = []
    for v in sol:
        full = [ZERO] * rep.dim
        for a, x in zip(coords, v):
            full[a] = x
        out.append(full)
    return out
