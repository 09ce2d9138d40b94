"""Exact spans of vectors and operators, Krylov closure and principal angles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .matrix import Matrix, rank, rref
from .scalars import ONE, ZERO, GaussQ, as_gq

__all__ = [
    "EchelonBasis",
    "Subspace",
    "OperatorSpan",
    "KrylovResult",
    "krylov_span",
    "span_equal",
    "algebra_closure",
    "principal_angles",
    "restrict_operator",
    "DependentBasisError",
]


class DependentBasisError(ValueError):
    def __init__(self, index: int, label: str | None = None):
        self.index = index
        self.label = label
        what = f"element {index}" + (f" ({label})" if label else "")
        super().__init__(f"basis is rank-deficient: {what} lies in the span of the earlier ones")


Sparse = dict[int, GaussQ]


def _sparse(v: Iterable[GaussQ]) -> Sparse:
    return {i: x for i, x in enumerate(v) if x}


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis of sparse vectors."""

    def __init__(self, length: int):
        self.length = length
        self.rows: dict[int, Sparse] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sparse) -> Sparse:
        v = dict(v)
        for p, row in self.rows.items():
            c = v.get(p)
            if c:
                for k, x in row.items():
                    y = v.get(k, ZERO) - c * x
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
        return v

    def insert(self, v: Sparse) -> bool:
        """Add ``v``; returns False when it was already in the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = r[p].inverse()
        r = {k: x * inv for k, x in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                for k, x in r.items():
                    y = row.get(k, ZERO) - c * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
        self.rows[p] = r
        return True

    def contains(self, v: Sparse) -> bool:
        return not self.reduce(v)

    def dense_rows(self) -> list[list[GaussQ]]:
        out = []
        for p in sorted(self.rows):
            row = [ZERO] * self.length
            for k, x in self.rows[p].items():
                row[k] = x
            out.append(row)
        return out


class Subspace:
    """A subspace of Q(i)^d with a fixed basis and exact coordinates."""

    def __init__(self, dim: int, basis: Sequence[Sequence[GaussQ]]):
        self.ambient = dim
        self.basis = [list(v) for v in basis]
        k = len(self.basis)
        if k:
            cols = Matrix([list(col) for col in zip(*self.basis)])  # d x k
            red, piv = rref(Matrix([list(v) for v in self.basis]))
            if len(piv) != k:
                raise DependentBasisError(_first_dependent(self.basis))
            # rows of the basis matrix that form an invertible k x k block
            _, rows = rref(cols.transpose())
            self._pivot_rows = rows
            block = Matrix([[cols.data[r][j] for j in range(k)] for r in rows])
            aug = Matrix([list(row) + [ONE if i == j else ZERO for j in range(k)] for i, row in enumerate(block.data)])
            self._block_inv = rref(aug)[0].block(0, k, k, 2 * k)
        else:
            self._pivot_rows = []
            self._block_inv = Matrix.zeros(0)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[GaussQ]) -> list[GaussQ] | None:
        """Exact coordinates of v, or None if v is outside the subspace."""
        k = self.dim
        if not k:
            return [] if not any(v) else None
        rhs = [v[r] for r in self._pivot_rows]
        c = self._block_inv.apply(rhs)
        recon = [ZERO] * self.ambient
        for coef, b in zip(c, self.basis):
            if coef:
                recon = [x + coef * y for x, y in zip(recon, b)]
        if any(x != y for x, y in zip(recon, v)):
            return None
        return c


def _first_dependent(vectors: Sequence[Sequence[GaussQ]]) -> int:
    eb = EchelonBasis(len(vectors[0]) if vectors else 0)
    for i, v in enumerate(vectors):
        if not eb.insert(_sparse(v)):
            return i
    return -1


def restrict_operator(op: Matrix, basis: Sequence[Sequence[GaussQ]] | Subspace) -> Matrix:
    """Matrix of ``op`` on an invariant subspace, in the given basis."""
    sub = basis if isinstance(basis, Subspace) else Subspace(op.rows, basis)
    k = sub.dim
    cols = []
    for b in sub.basis:
        c = sub.coordinates(op.apply(b))
        if c is None:
            raise ValueError("subspace is not invariant under the operator")
        cols.append(c)
    return Matrix._wrap([[cols[j][i] for j in range(k)] for i in range(k)], k, k)


@dataclass
class OperatorSpan:
    """Linearly independent d x d operators with optional provenance labels."""

    ambient_dim: int
    basis: list[Matrix] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.labels) < len(self.basis):
            self.labels = list(self.labels) + [""] * (len(self.basis) - len(self.labels))
        self._eb = EchelonBasis(self.ambient_dim ** 2)
        for i, m in enumerate(self.basis):
            if m.shape != (self.ambient_dim, self.ambient_dim):
                raise ValueError(f"basis element {i} has shape {m.shape}")
            if not self._eb.insert(_sparse(m.flat())):
                raise DependentBasisError(i, self.labels[i] or None)

    @classmethod
    def from_generators(cls, dim: int, mats: Iterable[Matrix], labels: Iterable[str] | None = None) -> "OperatorSpan":
        """Span of a generating family; dependent members are dropped."""
        out = cls(dim)
        labels = list(labels) if labels is not None else None
        for i, m in enumerate(mats):
            out.add(m, labels[i] if labels else "")
        return out

    def add(self, m: Matrix, label: str = "") -> bool:
        if self._eb.insert(_sparse(m.flat())):
            self.basis.append(m)
            self.labels.append(label)
            return True
        return False

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, m: Matrix) -> bool:
        return self._eb.contains(_sparse(m.flat()))

    def contains_span(self, other: "OperatorSpan") -> bool:
        return all(self.contains(m) for m in other.basis)

    def flat_rows(self) -> list[list[GaussQ]]:
        return [m.flat() for m in self.basis]

    def echelon_rows(self) -> list[list[GaussQ]]:
        """Canonical reduced basis, independent of generator order."""
        return self._eb.dense_rows()

    def __getstate__(self):
        return {"ambient_dim": self.ambient_dim, "basis": self.basis, "labels": self.labels}

    def __setstate__(self, state):
        self.ambient_dim = state["ambient_dim"]
        self.basis = list(state["basis"])
        self.labels = list(state["labels"])
        self._eb = EchelonBasis(self.ambient_dim ** 2)
        for m in self.basis:
            self._eb.insert(_sparse(m.flat()))


def span_equal(a: OperatorSpan, b: OperatorSpan) -> bool:
    """Exact span equality by rank of the stacked bases."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("spans live in different ambient spaces")
    if a.dim != b.dim:
        return False
    if not a.dim:
        return True
    return rank(a.flat_rows() + b.flat_rows()) == a.dim


@dataclass
class KrylovResult:
    basis: list[list[GaussQ]]
    stabilized: bool

    @property
    def dim(self) -> int:
        return len(self.basis)


def krylov_span(generators: Sequence[Matrix], v: Sequence[GaussQ], cap: int | None = None) -> KrylovResult:
    """Smallest subspace containing ``v`` and invariant under every generator (BFS)."""
    v = [as_gq(x) for x in v]
    if not any(v):
        raise ValueError("the starting vector is zero")
    d = len(v)
    for g in generators:
        if g.shape != (d, d):
            raise ValueError("generator shape does not match the vector")
    cap = d if cap is None else cap
    eb = EchelonBasis(d)
    eb.insert(_sparse(v))
    basis = [list(v)]
    frontier = [list(v)]
    while frontier:
        nxt = []
        for w in frontier:
            for g in generators:
                gw = g.apply(w)
                if eb.insert(_sparse(gw)):
                    basis.append(gw)
                    nxt.append(gw)
                    if len(basis) == d:
                        return KrylovResult(basis, True)
                    if len(basis) >= cap:
                        return KrylovResult(basis, False)
        frontier = nxt
    return KrylovResult(basis, True)


def algebra_closure(span: OperatorSpan, generators: Sequence[Matrix] | None = None, cap: int | None = None) -> OperatorSpan:
    """The unital algebra generated by ``generators`` (default: the span's basis)."""
    d = span.ambient_dim
    gens = list(span.basis if generators is None else generators)
    cap = d * d if cap is None else cap
    out = OperatorSpan(d)
    out.add(Matrix.identity(d), "1")
    for m, lab in zip(span.basis, span.labels):
        out.add(m, lab)
    frontier = list(out.basis)
    while frontier and out.dim < cap:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                if out.add(y, "product"):
                    nxt.append(y)
                    if out.dim >= cap:
                        break
        frontier = nxt
    return out


def _float_basis(span: OperatorSpan) -> np.ndarray:
    rows = span.echelon_rows()
    if not rows:
        return np.zeros((span.ambient_dim ** 2, 0), dtype=complex)
    return np.array([[complex(x) for x in r] for r in rows], dtype=complex).T


def principal_angles(a: OperatorSpan, b: OperatorSpan) -> list[float]:
    """Principal angles under the Frobenius pairing, largest first.

    The exact reduced echelon bases are converted to floating point and
    handed to :func:`scipy.linalg.subspace_angles`.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("spans live in different ambient spaces")
    for s in (a, b):
        if rank(s.flat_rows()) != s.dim:
            raise DependentBasisError(_first_dependent(s.flat_rows()))
    if not a.dim or not b.dim:
        return []
    angles = scipy.linalg.subspace_angles(_float_basis(a), _float_basis(b))
    return [float(x) for x in angles]
