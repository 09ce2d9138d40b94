"""Images of Bethe, shift-of-argument and Gelfand-Tsetlin subalgebras on modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Sequence

from .exactlinalg import (
    ONE,
    ZERO,
    GaussQ,
    Matrix,
    OperatorSpan,
    RatOpMatrix,
    algebra_closure,
    as_gq,
    format_scalar,
    nullspace,
    ratop_inverse,
    ratop_mul,
    solve,
)
from .glnrep import Irrep
from .yangian import DiagonalParam, YModule, _perm_sign, principal_minor, tau_series

__all__ = [
    "SubalgebraImage",
    "LimitRecipe",
    "bethe_image",
    "soa_image",
    "soa_generators",
    "gt_image",
    "classical_gt_image",
    "limit_family",
    "predicted_limit_span",
    "sigma1_transform",
    "soa_limit_image",
    "exact_limit_span",
]


@dataclass
class SubalgebraImage:
    span: OperatorSpan
    family: str
    module: str = ""
    generators: list[Matrix] = field(default_factory=list)

    @property
    def labels(self) -> list[str]:
        return self.span.labels

    @property
    def dim(self) -> int:
        return self.span.dim

    def closure(self, cap: int | None = None) -> "SubalgebraImage":
        """Product closure: the image of the unital algebra generated."""
        gens = self.generators or self.span.basis
        closed = algebra_closure(self.span, gens, cap)
        return SubalgebraImage(closed, self.family + "*", self.module, gens)


def _image(dim: int, items: Sequence[tuple[str, Matrix]], family: str, module: str) -> SubalgebraImage:
    span = OperatorSpan(dim)
    span.add(Matrix.identity(dim), "1")
    gens = []
    for label, m in items:
        gens.append(m)
        span.add(m, label)
    return SubalgebraImage(span, family, module, gens)


# Bethe --------------------------------------------------------------------

def bethe_generators(m: YModule, C: DiagonalParam, max_order: int) -> list[tuple[str, Matrix]]:
    if not C.is_invertible():
        raise ValueError("Bethe subalgebra needs an invertible C")
    out = []
    for p in range(1, m.n + 1):
        xs = tau_series(m, C, p).series(max_order)
        out.extend((f"tau_{p}^({r})", xs[r]) for r in range(1, max_order + 1))
    return out


def bethe_image(m: YModule, C: DiagonalParam, max_order: int, closure: bool = False) -> SubalgebraImage:
    """Span of the identity and the coefficients of tau_p(u, C), p = 1..n."""
    img = _image(m.dim, bethe_generators(m, C, max_order), f"Bethe{C.to_strings()}", m.describe())
    return img.closure() if closure else img


# shift of argument -----------------------------------------------------------

def _gl_ops(rep) -> list[list[Matrix]]:
    if isinstance(rep, Irrep):
        return rep.ops()
    if isinstance(rep, YModule):
        return rep.gl_action()
    return [list(row) for row in rep]


def _elementary(vals: Sequence[GaussQ], c: int) -> GaussQ:
    acc = ZERO
    for sub in combinations(vals, c):
        p = ONE
        for x in sub:
            p = p * x
        acc = acc + p
    return acc


def _sym_product(ops: Sequence[Matrix], dim: int) -> Matrix:
    """Average of the products over all orderings (symmetrization)."""
    k = len(ops)
    if k == 0:
        return Matrix.identity(dim)
    acc = Matrix.zeros(dim)
    for perm in permutations(range(k)):
        prod = ops[perm[0]]
        for idx in perm[1:]:
            prod = prod @ ops[idx]
        acc = acc + prod
    return acc.scale(GaussQ(Fraction(1, factorial(k))))


def sym_minor(ops: Sequence[Sequence[Matrix]], L: Sequence[int], dim: int) -> Matrix:
    """sym(det(E_L)) for a principal index set L (0-based), monomial by monomial."""
    acc = Matrix.zeros(dim)
    for perm in permutations(range(len(L))):
        factors = [ops[L[a]][L[perm[a]]] for a in range(len(L))]
        if any(f.is_zero() for f in factors):
            continue
        term = _sym_product(factors, dim)
        acc = acc + term if _perm_sign(perm) > 0 else acc - term
    return acc


def soa_generators(rep, chi: DiagonalParam | Sequence, index_set: Sequence[int] | None = None, dim: int | None = None) -> list[tuple[str, Matrix]]:
    """sym(d^c_chi P_i) for 1 <= i <= m, 0 <= c <= i-1.

    ``d^c_chi P_i = sum_{|L| = i-c} e_c(chi on the complement of L) det(E_L)``
    over principal index sets; ``index_set`` restricts to a gl_k block.
    """
    ops = _gl_ops(rep)
    entries = chi.entries if isinstance(chi, DiagonalParam) else tuple(as_gq(x) for x in chi)
    idx = list(index_set) if index_set is not None else list(range(len(ops)))
    if len(entries) != len(idx):
        raise ValueError("shift parameter size does not match the gl block")
    chi_of = dict(zip(idx, entries))
    dim = ops[0][0].rows if dim is None else dim
    minors: dict[tuple[int, ...], Matrix] = {}
    out = []
    for i in range(1, len(idx) + 1):
        for c in range(i):
            acc = Matrix.zeros(dim)
            for L in combinations(idx, i - c):
                rest = [chi_of[a] for a in idx if a not in L]
                coef = _elementary(rest, c)
                if not coef:
                    continue
                if L not in minors:
                    minors[L] = sym_minor(ops, L, dim)
                acc = acc + minors[L].scale(coef)
            out.append((f"sym d^{c} P_{i}", acc))
    return out


def soa_image(rep, chi: DiagonalParam | Sequence, z=None, closure: bool = False) -> SubalgebraImage:
    """A_chi acting on a gl_m-module (an Irrep, or a YModule through t^(1)).

    ``z`` is accepted for symmetry with the evaluation pipeline; t^(1) acts by
    E_ij at every evaluation point, so A_chi does not depend on it.
    """
    ops = _gl_ops(rep)
    dim = ops[0][0].rows
    label = [format_scalar(x) for x in (chi.entries if isinstance(chi, DiagonalParam) else chi)]
    img = _image(dim, soa_generators(ops, chi), f"SOA{label}", "")
    return img.closure() if closure else img


def classical_gt_image(rep, closure: bool = False) -> SubalgebraImage:
    """Centers of U(gl_1) c ... c U(gl_m): symmetrized P_i of the upper-left blocks."""
    ops = _gl_ops(rep)
    dim = ops[0][0].rows
    items = []
    for k in range(1, len(ops) + 1):
        for i in range(1, k + 1):
            acc = Matrix.zeros(dim)
            for L in combinations(range(k), i):
                acc = acc + sym_minor(ops, L, dim)
            items.append((f"P_{i}(gl_{k})", acc))
    img = _image(dim, items, "classicalGT", "")
    return img.closure() if closure else img


# Gelfand-Tsetlin -------------------------------------------------------------

def gt_generators(m: YModule, max_order: int) -> list[tuple[str, Matrix]]:
    out = []
    for p in range(1, m.n + 1):
        xs = principal_minor(m, list(range(1, p + 1))).series(max_order)
        out.extend((f"t^[1..{p}]^({r})", xs[r]) for r in range(1, max_order + 1))
    return out


def gt_image(m: YModule, max_order: int, closure: bool = False) -> SubalgebraImage:
    """Coefficients of the principal minors t^{1..p}_{1..p}(u), p = 1..n."""
    img = _image(m.dim, gt_generators(m, max_order), "GT", m.describe())
    return img.closure() if closure else img


# limit recipes ---------------------------------------------------------------

@dataclass(frozen=True)
class LimitRecipe:
    """One-step degeneration data.

    kind ``generic``: ``C``; ``first``: ``C0`` (size n-k) and ``C1`` (size k);
    ``second``: ``multiplicities`` [(a_i, k_i)] and ``blocks`` [C_i];
    ``caterpillar``: only ``n``.  ``target`` is ``bethe`` for points read in
    the Bethe family and ``soa`` for their sigma_1 images.
    """

    kind: str
    n: int
    C: DiagonalParam | None = None
    C0: DiagonalParam | None = None
    C1: DiagonalParam | None = None
    multiplicities: tuple[tuple[GaussQ, int], ...] = ()
    blocks: tuple[DiagonalParam, ...] = ()
    target: str = "bethe"
    reversed_chain: bool = False

    def __post_init__(self):
        k = self.kind
        if k == "generic":
            if self.C is None or self.C.size != self.n:
                raise ValueError("generic recipe needs C of size n")
            if not self.C.regular:
                raise ValueError("generic recipe needs a regular C")
        elif k == "first":
            if self.C0 is None or self.C1 is None or self.C0.size + self.C1.size != self.n:
                raise ValueError("first-type recipe needs C0, C1 with sizes summing to n")
            if not self.C0.size or not self.C1.size:
                raise ValueError("first-type recipe needs nonempty C0 and C1")
            for c in (self.C0, self.C1):
                if not c.is_invertible() or len(set(c.entries)) != c.size:
                    raise ValueError("first-type recipe needs nonzero, pairwise distinct entries in C0 and C1")
        elif k == "second":
            mults = self.multiplicities
            if sum(ki for _, ki in mults) != self.n:
                raise ValueError("block multiplicities must sum to n")
            if len({a for a, _ in mults}) != len(mults):
                raise ValueError("second-type recipe needs pairwise distinct a_i")
            if len(self.blocks) != len(mults) or any(b.size != ki for b, (_, ki) in zip(self.blocks, mults)):
                raise ValueError("one block parameter C_i of size k_i is needed per multiplicity")
            if any(len(set(b.entries)) != b.size for b in self.blocks):
                raise ValueError("each block parameter C_i must be regular")
        elif k == "caterpillar":
            if self.n < 1:
                raise ValueError("caterpillar needs n >= 1")
        else:
            raise ValueError(f"unknown recipe kind {k!r}")

    @classmethod
    def generic(cls, C: DiagonalParam) -> "LimitRecipe":
        return cls("generic", C.size, C=C)

    @classmethod
    def first(cls, C0: DiagonalParam, C1: DiagonalParam) -> "LimitRecipe":
        return cls("first", C0.size + C1.size, C0=C0, C1=C1)

    @classmethod
    def second(cls, multiplicities: Sequence[tuple], blocks: Sequence[DiagonalParam]) -> "LimitRecipe":
        mults = tuple((as_gq(a), int(k)) for a, k in multiplicities)
        return cls("second", sum(k for _, k in mults), multiplicities=mults, blocks=tuple(blocks))

    @classmethod
    def caterpillar(cls, n: int) -> "LimitRecipe":
        return cls("caterpillar", n)

    def block_ranges(self) -> list[list[int]]:
        """0-based index sets of the second-type blocks."""
        out, start = [], 0
        for _, k in self.multiplicities:
            out.append(list(range(start, start + k)))
            start += k
        return out

    def describe(self) -> dict:
        d: dict = {"kind": self.kind, "n": self.n, "target": self.target}
        if self.C is not None:
            d["C"] = self.C.to_strings()
        if self.C0 is not None:
            d["C0"] = self.C0.to_strings()
        if self.C1 is not None:
            d["C1"] = self.C1.to_strings()
        if self.multiplicities:
            d["multiplicities"] = [[format_scalar(a), k] for a, k in self.multiplicities]
            d["blocks"] = [b.to_strings() for b in self.blocks]
        if self.reversed_chain:
            d["reversed_chain"] = True
        return d


def limit_family(recipe: LimitRecipe, t) -> DiagonalParam:
    """The diagonal matrix C(t) of a recipe; raises if C(t) is not regular."""
    t = as_gq(t)
    if not t:
        raise ValueError("t must be nonzero")
    k = recipe.kind
    if k == "generic":
        entries = list(recipe.C.entries)
    elif k == "first":
        entries = list(recipe.C0.entries) + [t * x for x in recipe.C1.entries]
    elif k == "second":
        entries = []
        for (a, _), b in zip(recipe.multiplicities, recipe.blocks):
            entries.extend(a + t * x for x in b.entries)
    else:
        entries = [t ** i for i in range(recipe.n)]
    if len(set(entries)) != len(entries):
        raise ValueError(f"C(t) is not regular at t = {format_scalar(t)}")
    return DiagonalParam(entries)


def _psi_generators(m: YModule, C0: DiagonalParam, C1: DiagonalParam, max_order: int) -> list[tuple[str, Matrix]]:
    """Coefficients of t^{[n-k]}(u+n-k)^{-1} sum_S b_S t^{[n-k] u S}(u), S nonempty."""
    nk = C0.size
    base = list(range(1, nk + 1))
    q = principal_minor(m, base)
    q_inv_shifted = ratop_inverse(q).shifted(nk)
    out = []
    tail = list(range(nk + 1, m.n + 1))
    for size in range(1, len(tail) + 1):
        total = None
        for S in combinations(tail, size):
            c = ONE
            for s in S:
                c = c * C1.entries[s - nk - 1]
            term = principal_minor(m, base + list(S)).scale(c)
            total = term if total is None else total + term
        series = ratop_mul(q_inv_shifted, total).series(max_order)
        out.extend((f"psi_{size}^({r})", series[r]) for r in range(1, max_order + 1))
    return out


def _upper_bethe_generators(m: YModule, C0: DiagonalParam, max_order: int) -> list[tuple[str, Matrix]]:
    """i_k(B(C0)): tau_p built from the upper-left minors only."""
    nk = C0.size
    out = []
    for p in range(1, nk + 1):
        total = None
        for I in combinations(range(1, nk + 1), p):
            c = ONE
            for i in I:
                c = c * C0.entries[i - 1]
            term = principal_minor(m, list(I)).scale(c)
            total = term if total is None else total + term
        xs = total.series(max_order)
        out.extend((f"i(tau_{p})^({r})", xs[r]) for r in range(1, max_order + 1))
    return out


def predicted_limit_span(recipe: LimitRecipe, m: YModule, max_order: int, closure: bool = False) -> SubalgebraImage:
    """The limit subalgebra predicted for a one-step recipe on a module."""
    if recipe.target != "bethe":
        raise ValueError("predicted_limit_span takes Bethe-side recipes; use soa_limit_image for sigma_1 images")
    k = recipe.kind
    if k == "generic":
        raise ValueError("a generic recipe has no limit to predict")
    if k == "caterpillar":
        return gt_image(m, max_order, closure)
    if k == "first":
        items = _upper_bethe_generators(m, recipe.C0, max_order) + _psi_generators(m, recipe.C0, recipe.C1, max_order)
        img = _image(m.dim, items, "Limit(first)", m.describe())
        return img.closure() if closure else img
    # second type: B(C0) with repeated eigenvalues, and A_{C_i} on the gl_{k_i} blocks via t^(1)
    C0 = DiagonalParam([a for a, kk in recipe.multiplicities for _ in range(kk)], regular=False)
    items = bethe_generators(m, C0, max_order)
    ops = m.gl_action()
    for b, rng in zip(recipe.blocks, recipe.block_ranges()):
        items.extend(soa_generators(ops, b, rng, m.dim))
    img = _image(m.dim, items, "Limit(second)", m.describe())
    return img.closure() if closure else img


def sigma1_transform(recipe: LimitRecipe) -> LimitRecipe:
    """The recipe of the sigma_1-image point, read in the shift-of-argument family."""
    k = recipe.kind
    if recipe.target != "bethe":
        raise ValueError("sigma_1 is applied to Bethe-side recipes")
    if k == "generic":
        return LimitRecipe("generic", recipe.n, C=recipe.C.inverse(), target="soa")
    if k == "first":
        nk = recipe.C0.size
        mults = [(ZERO, nk)] + [(x.inverse(), 1) for x in recipe.C1.entries]
        blocks = [recipe.C0.inverse()] + [DiagonalParam([ZERO]) for _ in recipe.C1.entries]
        return LimitRecipe("second", recipe.n, multiplicities=tuple(mults), blocks=tuple(blocks), target="soa")
    if k == "second":
        if any(not a for a, _ in recipe.multiplicities):
            raise ValueError("sigma_1 of a second-type recipe needs nonzero a_i")
        mults = tuple((a.inverse(), kk) for a, kk in recipe.multiplicities)
        return LimitRecipe("second", recipe.n, multiplicities=mults, blocks=recipe.blocks, target="soa")
    if k == "caterpillar":
        return LimitRecipe("caterpillar", recipe.n, target="soa", reversed_chain=True)
    raise ValueError(f"unsupported recipe kind {k!r}")


def soa_limit_image(recipe: LimitRecipe, rep, closure: bool = False) -> SubalgebraImage:
    """Shift-of-argument side of a (sigma_1-image) recipe on a gl_n-module."""
    if recipe.target != "soa":
        raise ValueError("soa_limit_image takes sigma_1-image recipes")
    ops = _gl_ops(rep)
    dim = ops[0][0].rows
    k = recipe.kind
    if k == "generic":
        return soa_image(ops, recipe.C, closure=closure)
    if k == "caterpillar":
        return classical_gt_image(ops, closure)
    if k == "second":
        chi0 = [a for a, kk in recipe.multiplicities for _ in range(kk)]
        items = soa_generators(ops, chi0, dim=dim)
        for b, rng in zip(recipe.blocks, recipe.block_ranges()):
            items.extend(soa_generators(ops, b, rng, dim))
        img = _image(dim, items, "SOA-limit(second)", "")
        return img.closure() if closure else img
    raise ValueError(f"unsupported recipe kind {k!r}")


# exact second-type limit -------------------------------------------------------

def _curve_entries(recipe: LimitRecipe, t: GaussQ) -> list[GaussQ]:
    """C(t) without the regularity guard; polynomial in t for every one-step kind."""
    k = recipe.kind
    if k == "first":
        return list(recipe.C0.entries) + [t * x for x in recipe.C1.entries]
    if k == "second":
        return [a + t * x for (a, _), b in zip(recipe.multiplicities, recipe.blocks) for x in b.entries]
    if k == "caterpillar":
        return [t ** i for i in range(recipe.n)]
    raise ValueError("a generic recipe has no limit")


def _curve_degree(recipe: LimitRecipe) -> int:
    """Bound on the t-degree of every tau_p coefficient along C(t)."""
    if recipe.kind == "caterpillar":
        return recipe.n * (recipe.n - 1) // 2
    return recipe.n


def _t_polynomials(recipe: LimitRecipe, m: YModule, max_order: int) -> list[list[list[GaussQ]]]:
    """Every Bethe generator at C(t) as its t-coefficient vectors (flattened operators).

    tau_p is homogeneous of degree p in the entries of C and C(t) is
    polynomial in t, so deg+1 exact samples determine each generator.
    """
    n = recipe.n
    deg = _curve_degree(recipe)
    ts = [as_gq(j) for j in range(deg + 1)]
    samples = []
    for t in ts:
        C = DiagonalParam(_curve_entries(recipe, t), regular=False)
        gens = []
        for p in range(1, n + 1):
            gens.extend(tau_series(m, C, p).series(max_order)[1:])
        samples.append([g.flat() for g in gens])
    vander = Matrix([[t ** k for k in range(deg + 1)] for t in ts])
    inv_cols = [solve(vander, [ONE if i == j else ZERO for i in range(deg + 1)]) for j in range(deg + 1)]
    out = []
    for g in range(len(samples[0])):
        coeffs = []
        for k in range(deg + 1):
            vec = [ZERO] * len(samples[0][g])
            for j in range(deg + 1):
                w = inv_cols[j][k]
                if w:
                    vec = [a + w * b for a, b in zip(vec, samples[j][g])]
            coeffs.append(vec)
        out.append(coeffs)
    return out


def _valuation_normalize(v: list[list[GaussQ]]) -> list[list[GaussQ]] | None:
    for k, c in enumerate(v):
        if any(c):
            return v[k:]
    return None


def exact_limit_span(recipe: LimitRecipe, m: YModule, max_order: int, probe=None) -> SubalgebraImage:
    """The t -> 0 limit of span{1, tau_p coefficients at C(t)}, computed exactly.

    Any one-step recipe works since C(t) is polynomial in t.  Leading t-coefficients are taken after a
    t-adic reduction: while the leading vectors are dependent, the combination
    that cancels them is divided by t and replaces one of its members.
    ``probe`` is a regular point used to pick a C(t)-independent subfamily.
    """
    if recipe.kind == "generic":
        raise ValueError("a generic recipe has no limit")
    d = m.dim
    polys = _t_polynomials(recipe, m, max_order)
    ident = Matrix.identity(d).flat()
    polys.insert(0, [ident])
    probe = as_gq(probe if probe is not None else Fraction(1, 7))
    # a subfamily independent at the probe is independent over Q(i)(t)
    chosen: list[list[list[GaussQ]]] = []
    at_probe = OperatorSpan(d)
    for v in polys:
        val = [ZERO] * (d * d)
        pw = ONE
        for c in v:
            val = [a + pw * b for a, b in zip(val, c)]
            pw = pw * probe
        if at_probe.add(Matrix([val[r * d:(r + 1) * d] for r in range(d)])):
            chosen.append(_valuation_normalize(v))
    while True:
        lead = Matrix([list(col) for col in zip(*(v[0] for v in chosen))])
        null = nullspace(lead)
        if not null:
            break
        c = null[0]
        j = next(i for i, x in enumerate(c) if x)
        length = max(len(v) for v in chosen)
        w = []
        for k in range(length):
            acc = [ZERO] * (d * d)
            for ci, v in zip(c, chosen):
                if ci and k < len(v):
                    acc = [a + ci * b for a, b in zip(acc, v[k])]
            w.append(acc)
        w = _valuation_normalize(w)
        if w is None:
            raise RuntimeError("independent family became dependent during t-adic reduction")
        chosen[j] = w
    items = [(f"lim[{i}]", Matrix([v[0][r * d:(r + 1) * d] for r in range(d)])) for i, v in enumerate(chosen)]
    span = OperatorSpan(d)
    for label, mat in items:
        span.add(mat, label)
    return SubalgebraImage(span, f"ExactLimit({recipe.kind})", m.describe(), [mat for _, mat in items])
