"""Finite-dimensional Y(gl_n)-modules carried as rational operator matrices.

Convention (fixed once): the evaluation module of a gl_n-irreducible at
parameter z has ``T(u) = 1 + E/(u - z)``, i.e. ``t_ij(u)`` acts by
``delta_ij + E_ij (u - z)^{-1}``.  Tensor products use the coproduct
``t_ij(u) -> sum_k t_ik(u) (x) t_kj(u)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Any, Sequence

from .exactlinalg import (
    ONE,
    ZERO,
    GaussQ,
    Matrix,
    Poly,
    RatOpMatrix,
    as_gq,
    format_scalar,
    nullspace,
    ratop_inverse,
    ratop_mul,
)
from .exactlinalg.spans import Subspace
from .glnrep import GramForm, Irrep, Weight, build_irrep, highest_weight_subspace

__all__ = [
    "YModule",
    "DiagonalParam",
    "evaluation_module",
    "tensor_module",
    "shifted_module",
    "trivial_module",
    "quantum_minor",
    "quantum_minor_columns",
    "quantum_determinant",
    "tau_series",
    "tau_generators",
    "omega_image",
    "build_skew_module",
    "verify_rtt",
    "highest_weight_series",
    "module_drinfeld_polynomials",
]


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class DiagonalParam:
    entries: tuple[GaussQ, ...]
    regular: bool = True

    def __init__(self, entries: Sequence, regular: bool = True):
        es = tuple(as_gq(x) for x in entries)
        if regular and len(set(es)) != len(es):
            raise ValueError(f"diagonal parameter {[format_scalar(x) for x in es]} is flagged regular but has repeated entries")
        object.__setattr__(self, "entries", es)
        object.__setattr__(self, "regular", regular)

    @property
    def size(self) -> int:
        return len(self.entries)

    def scaled(self, a) -> "DiagonalParam":
        a = as_gq(a)
        return DiagonalParam([a * x for x in self.entries], self.regular)

    def inverse(self) -> "DiagonalParam":
        if any(not x for x in self.entries):
            raise ZeroDivisionError("diagonal parameter is not invertible")
        return DiagonalParam([x.inverse() for x in self.entries], self.regular)

    def is_invertible(self) -> bool:
        return all(self.entries)

    def to_strings(self) -> list[str]:
        return [format_scalar(x) for x in self.entries]


@dataclass
class YModule:
    n: int
    dim: int
    T: RatOpMatrix
    provenance: dict[str, Any]
    gram: GramForm | None = None
    factors: list[RatOpMatrix] = field(default_factory=list)
    """Lifted factor T's whose ordered product is T; enables factorwise inversion."""

    def entry(self, i: int, j: int) -> RatOpMatrix:
        """t_ij(u) as a size-1 rational operator (1-based)."""
        cache = self.__dict__.setdefault("_entries", {})
        key = (i, j)
        if key not in cache:
            cache[key] = self.T.entry(i - 1, j - 1)
        return cache[key]

    def coefficients(self, order: int) -> list[list[list[Matrix]]]:
        """``c[r][i][j]`` = t_{i+1,j+1}^{(r)} for r = 0..order (t^{(0)} = delta)."""
        cache = self.__dict__.setdefault("_coeffs", {})
        best = max((k for k in cache if k >= order), default=None)
        if best is None:
            xs = self.T.series(order)
            d = self.dim
            cache[order] = [
                [[x.block(i * d, (i + 1) * d, j * d, (j + 1) * d) for j in range(self.n)] for i in range(self.n)]
                for x in xs
            ]
            best = order
        return cache[best][: order + 1]

    def gl_action(self) -> list[list[Matrix]]:
        """The U(gl_n) action E_ij -> t_ij^{(1)}."""
        return self.coefficients(1)[1]

    def yangian_generators(self, order: int) -> list[Matrix]:
        """All t_ij^{(r)}, 1 <= r <= order."""
        cs = self.coefficients(order)
        return [cs[r][i][j] for r in range(1, order + 1) for i in range(self.n) for j in range(self.n)]

    def describe(self) -> str:
        return _describe(self.provenance)


def _describe(p: dict[str, Any]) -> str:
    kind = p.get("kind")
    if kind == "evaluation":
        return f"V{p['weight']}({p['z']})"
    if kind == "skew":
        return f"V{p['weight']}/{p['mu']}({p['z']})"
    if kind == "tensor":
        return " (x) ".join(_describe(q) for q in p["factors"])
    if kind == "shifted":
        return f"shift[{p['z']}]({_describe(p['base'])})"
    return str(p)


def trivial_module(n: int) -> YModule:
    return YModule(n, 1, RatOpMatrix.identity(n, 1), {"kind": "evaluation", "weight": str(Weight([0] * n)), "z": "0"}, GramForm(Matrix.identity(1)))


def evaluation_module(rep: Irrep, z=0, with_gram: bool = True) -> YModule:
    """V_lambda(z): ``T(u) = 1 + E/(u - z)``."""
    from .glnrep import gram_form

    z = as_gq(z)
    T = RatOpMatrix.evaluation(rep.ops(), z)
    gram = gram_form(rep) if with_gram else None
    prov = {"kind": "evaluation", "weight": str(rep.highest), "z": format_scalar(z)}
    return YModule(rep.m, rep.dim, T, prov, gram, [T])


def tensor_module(ms: Sequence[YModule]) -> YModule:
    """Ordered tensor product via the coproduct; left factor in the left slot."""
    if not ms:
        raise ValueError("empty tensor product")
    n = ms[0].n
    if any(m.n != n for m in ms):
        raise ValueError("rank mismatch in tensor product")
    if len(ms) == 1:
        return ms[0]
    dims = [m.dim for m in ms]
    total = 1
    for d in dims:
        total *= d
    lifted: list[RatOpMatrix] = []
    left = 1
    for m in ms:
        right = total // (left * m.dim)
        fs = m.factors or [m.T]
        lifted.extend(f.lift_tensor(left, right) for f in fs)
        left *= m.dim
    T = lifted[0]
    for f in lifted[1:]:
        T = ratop_mul(T, f)
    gram = None
    if all(m.gram is not None for m in ms):
        g = ms[0].gram
        for m in ms[1:]:
            g = g.tensor(m.gram)
        gram = g
    prov = {"kind": "tensor", "factors": [m.provenance for m in ms]}
    return YModule(n, total, T, prov, gram, lifted)


def shifted_module(m: YModule, z) -> YModule:
    """Pull back along tau_z: ``T(u) -> T(u - z)``."""
    z = as_gq(z)
    T = m.T.shifted(-z)
    fs = [f.shifted(-z) for f in m.factors]
    return YModule(m.n, m.dim, T, {"kind": "shifted", "z": format_scalar(z), "base": m.provenance}, m.gram, fs)


def quantum_minor(m: YModule, rows: Sequence[int], cols: Sequence[int]) -> RatOpMatrix:
    """Row expansion: sum_s sgn(s) t_{a_s(1) b_1}(u) ... t_{a_s(k) b_k}(u-k+1)."""
    _check_minor_indices(m, rows, cols)
    k = len(rows)
    total = None
    for perm in permutations(range(k)):
        acc = m.entry(rows[perm[0]], cols[0])
        for step in range(1, k):
            acc = ratop_mul(acc, m.entry(rows[perm[step]], cols[step]), -step)
        if _perm_sign(perm) < 0:
            acc = -acc
        total = acc if total is None else total + acc
    return total


def quantum_minor_columns(m: YModule, rows: Sequence[int], cols: Sequence[int]) -> RatOpMatrix:
    """Column expansion: sum_s sgn(s) t_{a_1 b_s(1)}(u-k+1) ... t_{a_k b_s(k)}(u)."""
    _check_minor_indices(m, rows, cols)
    k = len(rows)
    total = None
    for perm in permutations(range(k)):
        acc = m.entry(rows[0], cols[perm[0]]).shifted(-(k - 1))
        for step in range(1, k):
            acc = ratop_mul(acc, m.entry(rows[step], cols[perm[step]]), -(k - 1 - step))
        if _perm_sign(perm) < 0:
            acc = -acc
        total = acc if total is None else total + acc
    return total


def _check_minor_indices(m: YModule, rows: Sequence[int], cols: Sequence[int]) -> None:
    if len(rows) != len(cols) or not rows:
        raise ValueError("quantum minor needs equally many (>= 1) rows and columns")
    if len(rows) > m.n:
        raise ValueError(f"minor of order {len(rows)} exceeds rank {m.n}")
    for idx in (rows, cols):
        if any(a >= b for a, b in zip(idx, idx[1:])) or idx[0] < 1 or idx[-1] > m.n:
            raise ValueError("minor indices must be strictly increasing within 1..n")


def quantum_determinant(m: YModule) -> RatOpMatrix:
    idx = list(range(1, m.n + 1))
    return quantum_minor(m, idx, idx)


def principal_minor(m: YModule, subset: Sequence[int]) -> RatOpMatrix:
    cache = m.__dict__.setdefault("_pminors", {})
    key = tuple(subset)
    if key not in cache:
        cache[key] = quantum_minor(m, key, key)
    return cache[key]


def tau_series(m: YModule, C: DiagonalParam, p: int) -> RatOpMatrix:
    """tau_p(u, C) = sum over p-subsets I of (prod_{i in I} c_i) t^I_I(u)."""
    if C.size != m.n:
        raise ValueError("diagonal parameter size does not match the rank")
    if not 1 <= p <= m.n:
        raise ValueError(f"p = {p} outside 1..{m.n}")
    total = None
    for subset in combinations(range(1, m.n + 1), p):
        c = ONE
        for i in subset:
            c = c * C.entries[i - 1]
        if not c:
            continue
        term = principal_minor(m, subset).scale(c)
        total = term if total is None else total + term
    if total is None:
        return RatOpMatrix(1, m.dim, [], Poly([ONE]))
    return total


def tau_generators(m: YModule, C: DiagonalParam, p: int, max_order: int) -> list[tuple[str, Matrix]]:
    """Labelled coefficients of u^{-1} .. u^{-max_order} of tau_p(u, C)."""
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    xs = tau_series(m, C, p).series(max_order)
    return [(f"tau_{p}^({r})", xs[r]) for r in range(1, max_order + 1)]


def omega_image(m: YModule) -> RatOpMatrix:
    """(T(-u-n))^{-1} on the same space."""
    if m.factors and len(m.factors) > 1:
        inv = None
        for f in m.factors:
            fi = ratop_inverse(f)
            inv = fi if inv is None else ratop_mul(fi, inv)
        return inv.substitute(-1, -m.n)
    return ratop_inverse(m.T.substitute(-1, -m.n))


def omega_module(m: YModule) -> YModule:
    T = omega_image(m)
    return YModule(m.n, m.dim, T, {"kind": "omega", "base": m.provenance}, m.gram, [T])


def build_skew_module(lam: Weight | Sequence[int], mu: Weight | Sequence[int], z=0, with_gram: bool = True) -> YModule:
    """V_{lambda/mu}(z) on the gl_k-highest-weight-mu vectors of V_lambda.

    The Y(gl_n) action is the upper-left n x n block of
    ``(1 + E/(-u-n-k))^{-1}``, pulled back along ``tau_z``.
    """
    lam, mu = Weight(lam), Weight(mu)
    k = mu.rank
    n = lam.rank - k
    if n < 1:
        raise ValueError("skew module needs rank(lambda) > rank(mu)")
    rep = build_irrep(lam)
    basis = highest_weight_subspace(rep, mu) if k else [[ONE if i == j else ZERO for i in range(rep.dim)] for j in range(rep.dim)]
    if not basis:
        raise ValueError(f"multiplicity space M_{{{lam},{mu}}} is zero")
    full = RatOpMatrix.evaluation(rep.ops(), 0)
    big = ratop_inverse(full.substitute(-1, -(n + k)))
    D = rep.dim
    blocks_num = []
    for x in big.num:
        blocks_num.append(x.block(0, n * D, 0, n * D))
    upper = RatOpMatrix(n, D, blocks_num, big.den)
    sub = Subspace(D, basis)
    try:
        T = upper.restrict(sub.basis)
    except ValueError as exc:
        raise RuntimeError("restriction does not preserve the multiplicity space") from exc
    z = as_gq(z)
    if z:
        T = T.shifted(-z)
    gram = None
    if with_gram:
        gram = _restricted_gram(rep, sub)
    prov = {"kind": "skew", "weight": str(lam), "mu": str(mu), "z": format_scalar(z)}
    return YModule(n, len(basis), T, prov, gram, [T])


def _restricted_gram(rep: Irrep, sub: Subspace) -> GramForm:
    from .glnrep import gram_form

    G = gram_form(rep).matrix
    B = Matrix([list(col) for col in zip(*sub.basis)])
    return GramForm(B.adjoint() @ G @ B)


def verify_rtt(m: YModule | RatOpMatrix, order: int, n: int | None = None) -> bool:
    """Exact check of the RTT relation truncated at total order ``order``.

    Coefficientwise the relation reads
    ``[t_ij^(r+1), t_kl^(s)] - [t_ij^(r), t_kl^(s+1)] = t_kj^(r) t_il^(s) - t_kj^(s) t_il^(r)``.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    if isinstance(m, RatOpMatrix):
        T, n = m, m.n
    else:
        T, n = m.T, m.n
    d = T.d
    xs = T.series(order + 1)
    c = [[[x.block(i * d, (i + 1) * d, j * d, (j + 1) * d) for j in range(n)] for i in range(n)] for x in xs]
    rng = range(n)
    for r in range(order + 1):
        for s in range(order + 1 - r):
            for i in rng:
                for j in rng:
                    for k in rng:
                        for l in rng:
                            lhs = (
                                c[r + 1][i][j] @ c[s][k][l]
                                - c[s][k][l] @ c[r + 1][i][j]
                                - c[r][i][j] @ c[s + 1][k][l]
                                + c[s + 1][k][l] @ c[r][i][j]
                            )
                            rhs = c[r][k][j] @ c[s][i][l] - c[s][k][j] @ c[r][i][l]
                            if lhs != rhs:
                                return False
    return True


def highest_weight_series(m: YModule) -> tuple[list[GaussQ], list[tuple[Poly, Poly]]]:
    """Highest vector (killed by all t_ij, i < j) and the eigenvalue functions of t_ii(u).

    Returns the vector and, for each i, ``(numerator, denominator)`` of the
    scalar rational function by which t_ii(u) acts on it.
    """
    d = m.dim
    order = 2 * (m.T.den.degree + 1) + 2
    cs = m.coefficients(order)
    rows = []
    for r in range(1, order + 1):
        for i in range(m.n):
            for j in range(i + 1, m.n):
                rows.extend(row for row in cs[r][i][j].data if any(row))
    vecs = nullspace(Matrix(rows)) if rows else [[ONE if a == b else ZERO for a in range(d)] for b in range(d)]
    if len(vecs) != 1:
        raise ValueError(f"space of singular vectors has dimension {len(vecs)}, expected 1")
    v = vecs[0]
    piv = next(a for a, x in enumerate(v) if x)
    out = []
    for i in range(1, m.n + 1):
        e = m.entry(i, i)
        num = []
        for x in e.num:
            w = x.apply(v)
            lam = w[piv] * v[piv].inverse()
            if any(a != lam * b for a, b in zip(w, v)):
                raise ValueError("highest vector is not an eigenvector of t_ii(u)")
            num.append(lam)
        out.append((Poly(num), e.den))
    return v, out


def module_drinfeld_polynomials(m: YModule) -> list[Poly]:
    """Monic P_1..P_{n-1} with ``lambda_k(u) / lambda_{k+1}(u) = P_k(u+1) / P_k(u)``.

    P is found by solving ``P(u+1) D = P(u) N`` degree by degree; a solution
    is unique up to scale since periodic polynomials are constant.
    """
    _, series = highest_weight_series(m)
    bound = 4 * (m.T.den.degree + m.n) + 8
    out = []
    for (a, b), (c, d) in zip(series, series[1:]):
        N, D = a * d, b * c
        for deg in range(bound + 1):
            cols = [Poly([ZERO] * j + [ONE]).shift(1) * D - Poly([ZERO] * j + [ONE]) * N for j in range(deg + 1)]
            width = max((q.degree for q in cols), default=0) + 1
            M = Matrix([[q[r] for q in cols] for r in range(width)])
            null = nullspace(M)
            if null:
                out.append(Poly(null[0]).monic())
                break
        else:
            raise ValueError("ratio of highest weights is not of the form P(u+1)/P(u)")
    return out
