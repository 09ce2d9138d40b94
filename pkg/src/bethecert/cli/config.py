"""Run configuration: a sectioned key-value text format.

Grammar (INI style, ``#`` and ``;`` start comments)::

    [run]            n, seed, order, eps, dim_cap
    [factor.K]       weight = 2,0   z = 1/3   skew = 1     (K orders the factors)
    [subalgebra]     family = bethe|gt|soa|identity   C = 1, 2   regular = yes   closure = no
    [limit]          kind = caterpillar|first|second   C0, C1, multiplicities = a:k, ...
                     blocks = c, c | c   ts = 1/10, 1/100   threshold = 1e-6
    [check.LABEL]    type = <check> plus per-check keys

Scalars are written ``p/q`` or ``p/q+r/s i``; lists are comma separated.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from ..exactlinalg import format_scalar, parse_scalar
from ..glnrep import Weight
from ..yangian import DiagonalParam

__all__ = [
    "ConfigError",
    "FactorSpec",
    "SubalgebraSpec",
    "CheckSpec",
    "RunConfig",
    "parse_config",
    "parse_config_text",
    "CHECK_TYPES",
    "FAMILIES",
]

CHECK_TYPES = {
    "commutative": set(),
    "cyclic": {"trials", "seed"},
    "simple_spectrum": {"trials", "seed"},
    "selfadjoint_closure": {"algebra"},
    "kr_projector": {"n", "l", "r", "weight"},
    "ev_identity": {"weight", "z", "C", "chi"},
    "limit_convergence": {"ts", "threshold"},
    "limit_exact": {"probe"},
    "rtt": {"order"},
    "cactus": {"shape", "skew", "n", "families"},
}
FAMILIES = ("bethe", "gt", "soa", "identity")
_BOOL = {"yes": True, "true": True, "on": True, "1": True, "no": False, "false": False, "off": False, "0": False}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<config>"):
        self.line = line
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class FactorSpec:
    weight: tuple[int, ...]
    z: str = "0"
    skew: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SubalgebraSpec:
    family: str = "bethe"
    C: tuple[str, ...] | None = None
    regular: bool = True
    closure: bool = False


@dataclass(frozen=True)
class CheckSpec:
    label: str
    type: str
    params: tuple[tuple[str, str], ...] = ()

    def get(self, key: str, default: Any = None) -> Any:
        return dict(self.params).get(key, default)


@dataclass
class RunConfig:
    n: int
    seed: int = 0
    order: int | None = None
    eps: float = 1e-10
    dim_cap: int = 256
    factors: list[FactorSpec] = field(default_factory=list)
    subalgebra: SubalgebraSpec = field(default_factory=SubalgebraSpec)
    limit: dict[str, str] | None = None
    checks: list[CheckSpec] = field(default_factory=list)
    source: str = "<config>"

    @property
    def truncation(self) -> int:
        return self.order if self.order is not None else self.n + 2

    def canonical(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("source")
        d["checks"] = [{"label": c.label, "type": c.type, "params": dict(c.params)} for c in self.checks]
        return d

    def module_key(self) -> dict[str, Any]:
        return {"n": self.n, "factors": [asdict(f) for f in self.factors]}


class _Lines:
    """Line numbers of sections and keys, for error messages."""

    def __init__(self, text: str):
        self.sections: dict[str, int] = {}
        self.keys: dict[tuple[str, str], int] = {}
        sec = None
        for no, raw in enumerate(text.splitlines(), 1):
            s = raw.strip()
            m = re.match(r"^\[([^\]]+)\]", s)
            if m:
                sec = m.group(1).strip()
                self.sections.setdefault(sec, no)
            elif sec and s and s[0] not in "#;":
                k = re.split(r"[=:]", s, maxsplit=1)[0].strip().lower()
                self.keys.setdefault((sec, k), no)

    def of(self, section: str, key: str | None = None) -> int | None:
        if key is not None and (section, key) in self.keys:
            return self.keys[(section, key)]
        return self.sections.get(section)


def _ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text or text in ("()", "0-"):
        return ()
    return tuple(int(x) for x in text.strip("()").split(","))


def _scalar(text: str) -> str:
    return format_scalar(parse_scalar(text.strip()))


def _scalars(text: str) -> tuple[str, ...]:
    return tuple(_scalar(x) for x in text.split(",") if x.strip())


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    lines = _Lines(text)
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigError(str(exc).splitlines()[0], line, source) from None

    def fail(msg: str, section: str, key: str | None = None):
        raise ConfigError(msg, lines.of(section, key), source)

    def field_(section: str, key: str, conv, default=None):
        if key not in cp[section]:
            return default
        try:
            return conv(cp[section][key])
        except (ValueError, ZeroDivisionError) as exc:
            fail(f"[{section}] {key}: {exc}", section, key)

    known = {"run", "subalgebra", "limit"}
    for sec in cp.sections():
        if sec not in known and not sec.startswith(("factor.", "check.")):
            fail(f"unknown section [{sec}]", sec)

    factors_raw = []
    for sec in cp.sections():
        if sec.startswith("factor."):
            try:
                k = int(sec.split(".", 1)[1])
            except ValueError:
                fail(f"factor sections are numbered: [factor.1], [factor.2], ...; got [{sec}]", sec)
            for key in cp[sec]:
                if key not in ("weight", "z", "skew"):
                    fail(f"unknown key {key!r} in [{sec}]", sec, key)
            if "weight" not in cp[sec]:
                fail(f"[{sec}] needs a weight", sec)
            w = field_(sec, "weight", lambda s: Weight(_ints(s)).entries)
            z = field_(sec, "z", _scalar, "0")
            skew = field_(sec, "skew", lambda s: Weight(_ints(s)).entries)
            factors_raw.append((k, sec, FactorSpec(tuple(w), z, tuple(skew) if skew is not None else None)))
    factors_raw.sort(key=lambda t: t[0])

    if "run" in cp:
        for key in cp["run"]:
            if key not in ("n", "seed", "order", "eps", "dim_cap"):
                fail(f"unknown key {key!r} in [run]", "run", key)
    n = field_("run", "n", int) if "run" in cp else None
    if n is None:
        if not factors_raw:
            raise ConfigError("[run] n is required when there are no factors", lines.of("run"), source)
        f = factors_raw[0][2]
        n = len(f.weight) - (len(f.skew) if f.skew else 0)
    if n < 1:
        fail("n must be positive", "run", "n")
    run = cp["run"] if "run" in cp else {}
    seed = field_("run", "seed", int, 0) if run else 0
    order = field_("run", "order", int) if run else None
    eps = field_("run", "eps", float, 1e-10) if run else 1e-10
    dim_cap = field_("run", "dim_cap", int, 256) if run else 256
    if order is not None and order < 1:
        fail("order must be positive", "run", "order")

    for _, sec, f in factors_raw:
        k = len(f.skew) if f.skew else 0
        if len(f.weight) != n + k:
            fail(f"[{sec}] weight has {len(f.weight)} entries, expected n + len(skew) = {n + k}", sec, "weight")
        if f.skew and any(m > l for l, m in zip(f.weight, f.skew)):
            fail(f"[{sec}] skew {f.skew} does not fit inside {f.weight}", sec, "skew")

    sub = SubalgebraSpec()
    if "subalgebra" in cp:
        sec = "subalgebra"
        for key in cp[sec]:
            if key not in ("family", "c", "regular", "closure"):
                fail(f"unknown key {key!r} in [subalgebra]", sec, key)
        family = cp[sec].get("family", "bethe").strip()
        if family not in FAMILIES:
            fail(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}", sec, "family")
        regular = field_(sec, "regular", lambda s: _BOOL[s.strip().lower()], True)
        closure = field_(sec, "closure", lambda s: _BOOL[s.strip().lower()], False)
        C = field_(sec, "c", _scalars)
        if C is not None:
            if len(C) != n:
                fail(f"C has {len(C)} entries, expected n = {n}", sec, "c")
            try:
                DiagonalParam([parse_scalar(x) for x in C], regular)
            except ValueError as exc:
                fail(str(exc), sec, "c")
        if family in ("bethe", "soa") and C is None:
            fail(f"family {family} needs C", sec, "family")
        sub = SubalgebraSpec(family, C, regular, closure)

    limit = None
    if "limit" in cp:
        limit = {k: v.strip() for k, v in cp["limit"].items()}
        try:
            from .runner import build_recipe

            build_recipe(limit, n)
        except (ValueError, KeyError, ZeroDivisionError) as exc:
            fail(f"[limit] {exc}", "limit")

    checks = []
    for sec in cp.sections():
        if not sec.startswith("check."):
            continue
        label = sec.split(".", 1)[1]
        if "type" not in cp[sec]:
            fail(f"[{sec}] needs a type", sec)
        typ = cp[sec]["type"].strip()
        if typ not in CHECK_TYPES:
            fail(f"unknown check type {typ!r}; choose from {', '.join(sorted(CHECK_TYPES))}", sec, "type")
        params = {}
        for key, val in cp[sec].items():
            if key == "type":
                continue
            if key not in {k.lower() for k in CHECK_TYPES[typ]}:
                fail(f"check type {typ} has no key {key!r}", sec, key)
            params[key] = val.strip()
        if typ in ("limit_convergence", "limit_exact") and limit is None:
            fail(f"{typ} needs a [limit] section", sec, "type")
        if typ == "limit_exact" and limit.get("kind", "").strip() == "generic":
            fail("limit_exact needs a one-step recipe, not a generic one", sec, "type")
        if "probe" in params:
            try:
                parse_scalar(params["probe"])
            except ValueError:
                fail("probe must be an exact scalar", sec, "probe")
        if typ in ("commutative", "cyclic", "simple_spectrum", "selfadjoint_closure") and "subalgebra" not in cp:
            fail(f"check type {typ} needs a [subalgebra] section", sec, "type")
        for key in ("trials", "seed", "n", "l", "r", "order"):
            if key in params:
                try:
                    int(params[key])
                except ValueError:
                    fail(f"{key} must be an integer", sec, key)
        checks.append(CheckSpec(label, typ, tuple(sorted(params.items()))))
    if not checks:
        raise ConfigError("no [check.*] sections: nothing to run", None, source)

    return RunConfig(n, seed, order, eps, dim_cap, [f for _, _, f in factors_raw], sub, limit, checks, source)


def parse_config(path: str | Path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, str(p)) from None
    return parse_config_text(text, str(p))
