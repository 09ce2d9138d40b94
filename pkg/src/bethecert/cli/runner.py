"""Executing a run configuration: module construction, caching and check dispatch."""

from __future__ import annotations

import configparser
import hashlib
import io
import itertools
import json
import os
import pickle
import platform
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .. import __version__
from ..combinat import SkewDiagram, check_cactus_relations, enumerate_skew_ssyt
from ..exactlinalg import Matrix, OperatorSpan, parse_scalar
from ..glnrep import build_irrep
from ..subalgebras import LimitRecipe, SubalgebraImage, bethe_image, gt_image, soa_image
from ..verify import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    CertificateReport,
    check_commutative,
    check_cyclic,
    check_ev_identity,
    check_kr_projector,
    check_limit_convergence,
    check_limit_exact,
    check_selfadjoint_closure,
    check_simple_spectrum,
)
from ..yangian import (
    DiagonalParam,
    YModule,
    build_skew_module,
    evaluation_module,
    tensor_module,
    trivial_module,
    verify_rtt,
)
from .config import ConfigError, RunConfig, parse_config_text

__all__ = [
    "SCHEMA_VERSION",
    "DimensionCapError",
    "build_recipe",
    "module_dimension",
    "build_module",
    "build_image",
    "run_check",
    "execute",
    "parse_grid",
    "sweep",
    "exit_code",
    "dumps",
]

SCHEMA_VERSION = 1
_MODULE_FREE = ("kr_projector", "cactus", "ev_identity")


class DimensionCapError(ValueError):
    pass


def _param(text: str, regular: bool = True) -> DiagonalParam:
    return DiagonalParam([parse_scalar(x) for x in text.split(",") if x.strip()], regular)


def build_recipe(limit: dict[str, str], n: int) -> LimitRecipe:
    kind = limit.get("kind", "").strip()
    if kind == "caterpillar":
        r = LimitRecipe.caterpillar(n)
    elif kind == "generic":
        r = LimitRecipe.generic(_param(limit["c"]))
    elif kind == "first":
        r = LimitRecipe.first(_param(limit["c0"]), _param(limit["c1"]))
    elif kind == "second":
        mults = []
        for item in limit["multiplicities"].split(","):
            a, k = item.split(":")
            mults.append((parse_scalar(a), int(k)))
        blocks = [_param(b) for b in limit["blocks"].split("|")]
        r = LimitRecipe.second(mults, blocks)
    else:
        raise ValueError(f"unknown limit kind {kind!r}")
    if r.n != n:
        raise ValueError(f"recipe has size {r.n}, expected n = {n}")
    if "ts" in limit:
        ts = [parse_scalar(t) for t in limit["ts"].split(",")]
        if not ts:
            raise ValueError("ts is empty")
    return r


def _weyl_dim(lam: Sequence[int]) -> int:
    d = Fraction(1)
    m = len(lam)
    for i in range(m):
        for j in range(i + 1, m):
            d *= Fraction(lam[i] - lam[j] + j - i, j - i)
    return int(d)


def module_dimension(cfg: RunConfig) -> int:
    """Dimension of the configured module, computed without building it."""
    d = 1
    for f in cfg.factors:
        if f.skew:
            d *= len(enumerate_skew_ssyt(SkewDiagram(f.weight, f.skew), cfg.n))
        else:
            d *= _weyl_dim(f.weight)
    return d


def _module_hash(cfg: RunConfig) -> str:
    key = json.dumps({"version": __version__, **cfg.module_key()}, sort_keys=True)
    return hashlib.sha256(key.encode()).hexdigest()


def _construct(cfg: RunConfig) -> YModule:
    if not cfg.factors:
        return trivial_module(cfg.n)
    parts = []
    for f in cfg.factors:
        z = parse_scalar(f.z)
        if f.skew:
            m = build_skew_module(f.weight, f.skew, z)
        else:
            m = evaluation_module(build_irrep(f.weight), z)
        if m.dim == 0:
            raise ValueError(f"factor {f} is the zero module")
        parts.append(m)
    return parts[0] if len(parts) == 1 else tensor_module(parts)


_MEMO: dict[str, YModule] = {}


def build_module(cfg: RunConfig, cache_dir: str | Path | None = None) -> YModule:
    """Construct (or load from the content-addressed cache) the configured module."""
    dim = module_dimension(cfg)
    if dim > cfg.dim_cap:
        raise DimensionCapError(f"module dimension {dim} exceeds the cap {cfg.dim_cap}")
    key = _module_hash(cfg)
    if key in _MEMO:
        return _MEMO[key]
    path = Path(cache_dir) / f"{key}.pkl" if cache_dir is not None else None
    if path is not None and path.exists():
        with path.open("rb") as fh:
            m = pickle.load(fh)
    else:
        m = _construct(cfg)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "wb") as fh:
                pickle.dump(m, fh, protocol=pickle.HIGHEST_PROTOCOL)
            os.replace(tmp, path)
    _MEMO[key] = m
    return m


def build_image(cfg: RunConfig, m: YModule) -> SubalgebraImage:
    sub = cfg.subalgebra
    order = cfg.truncation
    if sub.family == "identity":
        span = OperatorSpan(m.dim, [Matrix.identity(m.dim)], ["1"])
        return SubalgebraImage(span, "identity", m.describe(), [("1", Matrix.identity(m.dim))])
    if sub.family == "gt":
        return gt_image(m, order, closure=sub.closure)
    C = DiagonalParam([parse_scalar(x) for x in sub.C], sub.regular)
    if sub.family == "bethe":
        return bethe_image(m, C, order, closure=sub.closure)
    if len(cfg.factors) != 1 or cfg.factors[0].skew:
        raise ValueError("family soa acts on a single non-skew factor")
    return soa_image(build_irrep(cfg.factors[0].weight), C, closure=sub.closure)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.strip("()").split(",") if x.strip()]


def run_check(cfg: RunConfig, index: int, cache_dir: str | Path | None = None) -> CertificateReport:
    spec = cfg.checks[index]
    typ = spec.type
    seed = int(spec.get("seed", cfg.seed))
    if typ == "kr_projector":
        if spec.get("weight"):
            w = _ints(spec.get("weight"))
            return check_kr_projector(len(w), weight=w)
        return check_kr_projector(int(spec.get("n", cfg.n)), int(spec.get("l")), int(spec.get("r")))
    if typ == "cactus":
        n = int(spec.get("n", cfg.n))
        fams = tuple(x.strip() for x in spec.get("families", "involution,commutation,nesting").split(","))
        d = SkewDiagram(_ints(spec.get("shape")), _ints(spec.get("skew", "")))
        return check_cactus_relations(d, n, families=fams)
    if typ == "ev_identity":
        f0 = cfg.factors[0] if cfg.factors else None
        w = _ints(spec.get("weight")) if spec.get("weight") else (list(f0.weight) if f0 else None)
        if w is None:
            raise ValueError("ev_identity needs a weight")
        z = parse_scalar(spec.get("z", f0.z if f0 else "0"))
        c_text = spec.get("c") or ",".join(cfg.subalgebra.C or ())
        chi = _param(spec.get("chi")) if spec.get("chi") else None
        return check_ev_identity(w, z, _param(c_text), cfg.truncation, soa_param=chi)
    if typ == "limit_convergence":
        recipe = build_recipe(cfg.limit, cfg.n)
        ts = [parse_scalar(t) for t in cfg.limit.get("ts", "1/10,1/100,1/1000,1/10000").split(",")]
        thr = spec.get("threshold", cfg.limit.get("threshold"))
        m = build_module(cfg, cache_dir)
        return check_limit_convergence(recipe, m, ts, cfg.eps, cfg.truncation, float(thr) if thr else None)
    if typ == "limit_exact":
        recipe = build_recipe(cfg.limit, cfg.n)
        probe = parse_scalar(spec["probe"]) if spec.get("probe") else None
        return check_limit_exact(recipe, build_module(cfg, cache_dir), cfg.truncation, probe)
    m = build_module(cfg, cache_dir)
    if typ == "rtt":
        order = int(spec.get("order", cfg.truncation))
        start = time.perf_counter()
        ok = verify_rtt(m, order)
        return CertificateReport("rtt", {"module": m.describe(), "order": order}, PASS if ok else FAIL,
                                 {"order": order}, time.perf_counter() - start)
    img = build_image(cfg, m)
    trials = int(spec.get("trials", 5))
    if typ == "commutative":
        return check_commutative(img)
    if typ == "cyclic":
        return check_cyclic(img, trials, seed)
    if typ == "simple_spectrum":
        return check_simple_spectrum(img, trials, seed)
    if typ == "selfadjoint_closure":
        algebra = spec.get("algebra", "yes").lower() in ("yes", "true", "1", "on")
        return check_selfadjoint_closure(img, m.gram, algebra)
    raise ValueError(f"unknown check type {typ}")


def _check_task(args) -> tuple[int, dict]:
    cfg, index, cache_dir, timings = args
    spec = cfg.checks[index]
    try:
        rep = run_check(cfg, index, cache_dir)
        out = rep.to_dict(timings)
    except DimensionCapError:
        raise
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        out = {"check": spec.type, "instance": {}, "verdict": FAIL, "witness": {}, "error": str(exc)}
    out["label"] = spec.label
    return index, out


def _summary(verdicts: Sequence[str]) -> dict[str, Any]:
    counts = {v: sum(1 for x in verdicts if x == v) for v in (PASS, FAIL, INCONCLUSIVE)}
    counts["overall"] = _overall(verdicts)
    return counts


def _overall(verdicts: Sequence[str]) -> str:
    if any(v == FAIL for v in verdicts):
        return FAIL
    if any(v == INCONCLUSIVE for v in verdicts):
        return INCONCLUSIVE
    return PASS


def exit_code(verdicts: Sequence[str]) -> int:
    return {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}[_overall(verdicts)]


def _versions() -> dict[str, str]:
    import numpy
    import scipy

    return {"bethecert": __version__, "python": platform.python_version(), "numpy": numpy.__version__, "scipy": scipy.__version__}


def _map(tasks: list, func, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(func, tasks))


def execute(cfg: RunConfig, jobs: int = 1, cache_dir: str | Path | None = None, timings: bool = False) -> dict[str, Any]:
    """Run every configured check; the report depends only on config and seed unless ``timings``."""
    start = time.perf_counter()
    if any(c.type not in _MODULE_FREE for c in cfg.checks):
        # warm the cache once so parallel workers load instead of rebuilding
        build_module(cfg, cache_dir)
    tasks = [(cfg, i, cache_dir, timings) for i in range(len(cfg.checks))]
    results = sorted(_map(tasks, _check_task, jobs), key=lambda t: t[0])
    checks = [r for _, r in results]
    report = {
        "schema_version": SCHEMA_VERSION,
        "versions": _versions(),
        "config": cfg.canonical(),
        "checks": checks,
        "summary": _summary([c["verdict"] for c in checks]),
    }
    if timings:
        report["wall_clock_s"] = round(time.perf_counter() - start, 6)
    return report


def parse_grid(spec: str) -> list[dict[str, str]]:
    """``"factor.1.z=0,1/3;factor.2.z=0"`` to the list of grid points (cartesian product)."""
    axes = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigError(f"grid axis {part!r} needs the form section.key=v1,v2,...", None, "--grid")
        name, values = part.split("=", 1)
        name = name.strip()
        if "." not in name:
            raise ConfigError(f"grid axis {name!r} must be section.key", None, "--grid")
        vals = [v.strip() for v in values.split(",") if v.strip()]
        if not vals:
            raise ConfigError(f"grid axis {name!r} has no values", None, "--grid")
        axes.append((name, vals))
    if not axes:
        return []
    names = [a for a, _ in axes]
    return [dict(zip(names, combo)) for combo in itertools.product(*[v for _, v in axes])]


def _apply_point(text: str, point: dict[str, str], source: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.read_string(text, source=source)
    for name, val in point.items():
        section, key = name.rsplit(".", 1)
        if section not in cp:
            raise ConfigError(f"grid axis {name!r}: no section [{section}]", None, "--grid")
        cp[section][key] = val
    buf = io.StringIO()
    cp.write(buf)
    label = source + " @ " + ",".join(f"{k}={v}" for k, v in point.items())
    return parse_config_text(buf.getvalue(), label)


def _point_task(args) -> dict:
    cfg, point, cache_dir, timings = args
    try:
        rep = execute(cfg, 1, cache_dir, timings)
    except DimensionCapError as exc:
        return {"point": point, "error": str(exc), "summary": {"overall": FAIL}}
    return {"point": point, "report": rep, "summary": rep["summary"]}


def sweep(text: str, grid: str, source: str = "<config>", jobs: int = 1, cache_dir: str | Path | None = None,
          timings: bool = False, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
    parse_config_text(text, source)
    points = parse_grid(grid)
    cfgs = []
    for p in points:
        cfg = _apply_point(text, p, source)
        if overrides:
            for k, v in overrides.items():
                setattr(cfg, k, v)
        cfgs.append(cfg)
    results = _map([(c, p, cache_dir, timings) for c, p in zip(cfgs, points)], _point_task, jobs)
    overall = [r["summary"]["overall"] for r in results]
    return {
        "schema_version": SCHEMA_VERSION,
        "versions": _versions(),
        "grid": grid,
        "points": results,
        "summary": {"points": len(results), **{v: overall.count(v) for v in (PASS, FAIL, INCONCLUSIVE)}},
    }


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
