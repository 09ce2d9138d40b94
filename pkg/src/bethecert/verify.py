"""Decidable certificates on concrete instances.

Every exact check is tolerance-free.  Random witnesses come from a seeded
:class:`random.Random` and are small-height Gaussian rationals, so a recorded
witness replays exactly.
"""

from __future__ import annotations

import random
from fractions import Fraction
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from .exactlinalg import (
    ZERO,
    Matrix,
    OperatorSpan,
    as_gq,
    charpoly,
    format_scalar,
    krylov_span,
    principal_angles,
    random_gaussian_rational,
    rank,
    span_equal,
    squarefree_charpoly_certificate,
)
from .glnrep import GramForm, Weight, build_irrep
from .subalgebras import (
    LimitRecipe,
    SubalgebraImage,
    bethe_image,
    exact_limit_span,
    limit_family,
    predicted_limit_span,
    soa_image,
)
from .yangian import DiagonalParam, YModule, evaluation_module

__all__ = [
    "CertificateReport",
    "check_commutative",
    "check_cyclic",
    "check_simple_spectrum",
    "check_selfadjoint_closure",
    "check_kr_projector",
    "kr_projector",
    "check_ev_identity",
    "check_limit_convergence",
    "check_limit_exact",
    "replay_cyclic",
    "replay_simple_spectrum",
    "PASS",
    "FAIL",
    "INCONCLUSIVE",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
WITNESS_HEIGHT = 97


@dataclass
class CertificateReport:
    check: str
    instance: dict[str, Any]
    verdict: str
    witness: dict[str, Any] = field(default_factory=dict)
    runtime: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        d = {
            "check": self.check,
            "instance": self.instance,
            "verdict": self.verdict,
            "witness": self.witness,
        }
        if self.note:
            d["note"] = self.note
        if timings:
            d["runtime_s"] = round(self.runtime, 6)
        return d


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _vec_strings(v) -> list[str]:
    return [format_scalar(x) for x in v]


def _instance(img: SubalgebraImage, **extra) -> dict[str, Any]:
    d = {"family": img.family, "module": img.module, "span_dim": img.dim}
    if img.span.basis:
        d["module_dim"] = img.span.ambient_dim
    d.update(extra)
    return d


def check_commutative(img: SubalgebraImage) -> CertificateReport:
    """Pass iff every pairwise commutator of basis operators is exactly zero."""
    with _Timer() as tm:
        basis, labels = img.span.basis, img.span.labels
        bad = None
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                c = basis[a] @ basis[b] - basis[b] @ basis[a]
                if not c.is_zero():
                    nz = sum(1 for x in c.flat() if x)
                    bad = {"pair": [labels[a] or str(a), labels[b] or str(b)], "nonzero_entries": nz}
                    break
            if bad:
                break
    verdict = FAIL if bad else PASS
    witness = bad or {"pairs_checked": len(basis) * (len(basis) - 1) // 2}
    return CertificateReport("commutative", _instance(img), verdict, witness, tm.elapsed)


def _random_vector(rng: random.Random, d: int) -> list:
    while True:
        v = [random_gaussian_rational(rng, WITNESS_HEIGHT) for _ in range(d)]
        if any(v):
            return v


def check_cyclic(img: SubalgebraImage, trials: int = 5, seed: int = 0) -> CertificateReport:
    """Pass iff a sampled vector generates the whole module under the image."""
    rng = random.Random(seed)
    d = img.span.ambient_dim
    with _Timer() as tm:
        best = 0
        found = None
        for trial in range(trials):
            v = _random_vector(rng, d)
            res = krylov_span(img.span.basis, v, cap=d)
            best = max(best, res.dim)
            if res.dim == d:
                found = (trial, v)
                break
    if found:
        witness = {"seed": seed, "trial": found[0], "vector": _vec_strings(found[1])}
        return CertificateReport("cyclic", _instance(img), PASS, witness, tm.elapsed)
    return CertificateReport(
        "cyclic",
        _instance(img),
        FAIL,
        {"seed": seed, "trials": trials, "best_dim": best},
        tm.elapsed,
        note="fail at these samples; this does not refute genericity",
    )


def replay_cyclic(img: SubalgebraImage, report: CertificateReport) -> bool:
    v = [as_gq(x) for x in report.witness["vector"]]
    return krylov_span(img.span.basis, v).dim == img.span.ambient_dim


def _combination(img: SubalgebraImage, coeffs) -> Matrix:
    d = img.span.ambient_dim
    g = Matrix.zeros(d)
    for c, b in zip(coeffs, img.span.basis):
        g = g + b.scale(c)
    return g


def check_simple_spectrum(img: SubalgebraImage, trials: int = 5, seed: int = 0, cross_check: bool = True) -> CertificateReport:
    """Pass iff a random combination has a squarefree characteristic polynomial."""
    rng = random.Random(seed)
    with _Timer() as tm:
        found = None
        for trial in range(trials):
            coeffs = [random_gaussian_rational(rng, WITNESS_HEIGHT) for _ in img.span.basis]
            g = _combination(img, coeffs)
            if squarefree_charpoly_certificate(g):
                found = (trial, coeffs, g)
                break
    if not found:
        return CertificateReport(
            "simple_spectrum",
            _instance(img),
            INCONCLUSIVE,
            {"seed": seed, "trials": trials},
            tm.elapsed,
            note="no separating element among the sampled combinations",
        )
    trial, coeffs, g = found
    witness: dict[str, Any] = {"seed": seed, "trial": trial, "coefficients": _vec_strings(coeffs)}
    if cross_check:
        # an operator with dim-many distinct eigenvalues has a cyclic vector
        d = img.span.ambient_dim
        rng2 = random.Random(seed + 1)
        ok = any(krylov_span([g], _random_vector(rng2, d)).dim == d for _ in range(trials))
        witness["cyclic_cross_check"] = ok
        if not ok:
            return CertificateReport("simple_spectrum", _instance(img), FAIL, witness, tm.elapsed,
                                     note="separating element found but no cyclic vector: internal inconsistency")
    return CertificateReport("simple_spectrum", _instance(img), PASS, witness, tm.elapsed)


def replay_simple_spectrum(img: SubalgebraImage, report: CertificateReport) -> bool:
    coeffs = [as_gq(x) for x in report.witness["coefficients"]]
    return squarefree_charpoly_certificate(_combination(img, coeffs))


def check_selfadjoint_closure(img: SubalgebraImage, gram: GramForm | None, algebra: bool = True) -> CertificateReport:
    """Pass iff the (algebra generated by the) image is closed under the form's adjoint."""
    if gram is None:
        raise ValueError("self-adjointness needs a Gram form on the module")
    with _Timer() as tm:
        target = img.closure() if algebra else img
        adj = OperatorSpan.from_generators(target.span.ambient_dim, [gram.adjoint(b) for b in target.span.basis])
        ok = span_equal(target.span, adj)
        witness: dict[str, Any] = {"algebra_dim": target.dim}
        if not ok:
            bad = next(i for i, b in enumerate(target.span.basis) if not target.span.contains(gram.adjoint(b)))
            witness["first_outside"] = target.span.labels[bad] or str(bad)
    return CertificateReport("selfadjoint_closure", _instance(img, algebra=algebra), PASS if ok else FAIL, witness, tm.elapsed)


def kr_projector(lam: Weight | Sequence[int]) -> Matrix:
    """P = sum_ij e_ij (x) rho(E_ij) on C^n (x) V_lam."""
    rep = build_irrep(lam)
    n, d = rep.m, rep.dim
    size = n * d
    grid = [[ZERO] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            e = rep.E(i + 1, j + 1)
            for a in range(d):
                for b in range(d):
                    grid[i * d + a][j * d + b] = e.data[a][b]
    return Matrix._wrap(grid, size, size)


def check_kr_projector(n: int, l: int | None = None, r: int | None = None, weight: Sequence[int] | None = None) -> CertificateReport:
    """P^2 = (l+n-r) P for the weight l*omega_r; with ``weight`` given, report whether any a works."""
    with _Timer() as tm:
        if weight is None:
            if not (1 <= r <= n - 1 and l >= 1):
                raise ValueError("need 1 <= r <= n-1 and l >= 1")
            lam = [l] * r + [0] * (n - r)
        else:
            lam = list(weight)
            if len(lam) != n:
                raise ValueError("weight length must equal n")
        P = kr_projector(lam)
        P2 = P @ P
        if weight is None:
            a = l + n - r
            ok = P2 == P.scale(a)
            witness = {"weight": lam, "a": a, "dim": P.rows}
        else:
            # P^2 = a P for some scalar a iff rank [P; P^2] == rank P
            ok = rank([P.flat(), P2.flat()]) == 1
            witness = {"weight": lam, "dim": P.rows, "proportional": ok}
            if ok:
                k = next(t for t, x in enumerate(P.flat()) if x)
                witness["a"] = format_scalar(P2.flat()[k] * P.flat()[k].inverse())
    return CertificateReport("kr_projector", {"n": n, "l": l, "r": r, "weight": lam}, PASS if ok else FAIL, witness, tm.elapsed)


def check_ev_identity(lam: Weight | Sequence[int], z, C: DiagonalParam, max_order: int | None = None,
                      soa_param: DiagonalParam | None = None) -> CertificateReport:
    """ev_z(B(C)) = A_{C^{-1}} on V_lam, compared as generated algebras.

    ``soa_param`` overrides C^{-1} (negative controls).
    """
    if not C.regular:
        raise ValueError("check_ev_identity needs a regular C")
    with _Timer() as tm:
        rep = build_irrep(lam)
        V = evaluation_module(rep, z, with_gram=False)
        order = max_order or rep.m + 2
        b = bethe_image(V, C, order, closure=True)
        chi = soa_param if soa_param is not None else C.inverse()
        a = soa_image(rep, chi, closure=True)
        ok = span_equal(b.span, a.span)
    inst = {"weight": list(rep.highest), "z": format_scalar(as_gq(z)), "C": C.to_strings(), "chi": chi.to_strings()}
    return CertificateReport("ev_identity", inst, PASS if ok else FAIL, {"bethe_dim": b.dim, "soa_dim": a.dim}, tm.elapsed)


def check_limit_convergence(recipe: LimitRecipe, m: YModule, ts: Sequence, eps: float = 1e-10,
                            max_order: int | None = None, threshold: float | None = None) -> CertificateReport:
    """Principal angles between B(C(t)) and the predicted limit must decrease to below eps*1e3."""
    if recipe.kind == "generic":
        raise ValueError("a generic recipe has nothing to converge to")
    ts = [as_gq(t) for t in ts]
    floats = [complex(t).real for t in ts]
    if any(a <= b for a, b in zip(floats, floats[1:])) or any(x <= 0 for x in floats):
        raise ValueError("ts must be positive and strictly decreasing")
    bound = eps * 1e3 if threshold is None else threshold
    with _Timer() as tm:
        order = max_order or m.n + 2
        target = predicted_limit_span(recipe, m, order, closure=True)
        angles = []
        for t in ts:
            C = limit_family(recipe, t)
            b = bethe_image(m, C, order, closure=True)
            if b.dim != target.dim:
                angles.append(float("inf"))
                continue
            angs = principal_angles(b.span, target.span)
            angles.append(max(angs) if angs else 0.0)
    # a sequence already inside the bound (exact zeros included) counts as decreasing
    monotone = all(a > b or max(a, b) < bound for a, b in zip(angles, angles[1:]))
    final_ok = angles[-1] < bound
    verdict = PASS if monotone and final_ok else FAIL
    witness = {
        "t": [format_scalar(t) for t in ts],
        "max_angle": [float(f"{a:.6e}") for a in angles],
        "monotone": monotone,
        "bound": bound,
        "limit_dim": target.dim,
    }
    note = "" if final_ok else "final angle above the bound"
    return CertificateReport("limit_convergence", {"recipe": recipe.describe(), "module": m.describe()}, verdict, witness, tm.elapsed, note)


def check_limit_exact(recipe: LimitRecipe, m: YModule, max_order: int | None = None, probe=None) -> CertificateReport:
    """Exact limit certificate for a one-step recipe.

    The closure of the exact limit of the generator span is contained in the
    limit algebra.  Pass when it equals the predicted closure and has the
    generic dimension; fail when it escapes the prediction; otherwise
    inconclusive.
    """
    if recipe.kind == "generic":
        raise ValueError("a generic recipe has nothing to converge to")
    probe = as_gq(probe if probe is not None else Fraction(1, 7))
    with _Timer() as tm:
        order = max_order or m.n + 2
        lim = exact_limit_span(recipe, m, order, probe).closure()
        target = predicted_limit_span(recipe, m, order, closure=True)
        generic = bethe_image(m, limit_family(recipe, probe), order, closure=True)
        inside = target.span.contains_span(lim.span)
        equal = inside and lim.dim == target.dim
    if equal and lim.dim == generic.dim:
        verdict, note = PASS, ""
    elif not inside:
        verdict, note = FAIL, "limit escapes the predicted span"
    elif lim.dim == generic.dim:
        verdict, note = FAIL, "predicted span is larger than the limit"
    else:
        verdict, note = INCONCLUSIVE, "limit closure below the generic dimension"
    witness = {"limit_dim": lim.dim, "predicted_dim": target.dim, "generic_dim": generic.dim, "probe": format_scalar(probe)}
    return CertificateReport("limit_exact", {"recipe": recipe.describe(), "module": m.describe()}, verdict, witness, tm.elapsed, note)
