"""``bethecert run <cfg>`` and ``bethecert sweep <cfg> --grid <spec>``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ..verify import FAIL, INCONCLUSIVE, PASS
from .config import ConfigError, parse_config, parse_config_text
from .runner import DimensionCapError, dumps, execute, exit_code, sweep

EXIT_USAGE = 3


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "bethecert"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bethecert", description="Exact certificates for Bethe subalgebras of Y(gl_n).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", type=Path)
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--seed", type=int, default=None, help="override [run] seed")
    common.add_argument("--no-cache", action="store_true", help="bypass the module cache")
    common.add_argument("--cache-dir", type=Path, default=None)
    common.add_argument("--dim-cap", type=int, default=None, help="refuse larger modules (default 256)")
    common.add_argument("--json", dest="json_out", default=None, help="write the JSON report here ('-' for stdout)")
    common.add_argument("--timings", action="store_true", help="include runtimes (reports stop being byte-stable)")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run the checks of one config")
    sw = sub.add_parser("sweep", parents=[common], help="run a config over a parameter grid")
    sw.add_argument("--grid", required=True, help='e.g. "factor.1.z=0,1/3,1/2;factor.2.z=0"')
    return p


def _emit(report: dict, dest: str | None) -> None:
    if dest is None:
        return
    text = dumps(report)
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _print_run(report: dict, out) -> None:
    for c in report["checks"]:
        extra = f"  ({c['error']})" if "error" in c else (f"  ({c['note']})" if c.get("note") else "")
        print(f"{c['label']:<24} {c['check']:<20} {c['verdict']}{extra}", file=out)
    s = report["summary"]
    print(f"summary: {s[PASS]} pass, {s[FAIL]} fail, {s[INCONCLUSIVE]} inconclusive", file=out)


def _print_sweep(report: dict, out) -> None:
    if not report["points"]:
        print("empty grid: no points", file=out)
    for r in report["points"]:
        point = ", ".join(f"{k}={v}" for k, v in r["point"].items())
        s = r["summary"]
        if "error" in r:
            print(f"{point:<40} error: {r['error']}", file=out)
        else:
            print(f"{point:<40} {s['overall']:<13} {s[PASS]}/{s[PASS] + s[FAIL] + s[INCONCLUSIVE]} pass", file=out)
    s = report["summary"]
    print(f"points: {s['points']}  pass: {s[PASS]}  fail: {s[FAIL]}  inconclusive: {s[INCONCLUSIVE]}", file=out)


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    cache_dir = None if args.no_cache else (args.cache_dir or default_cache_dir())
    # human summary goes to stderr when the JSON report takes stdout
    human = sys.stderr if args.json_out == "-" else sys.stdout
    try:
        if args.command == "run":
            cfg = parse_config(args.config)
            if args.seed is not None:
                cfg.seed = args.seed
            if args.dim_cap is not None:
                cfg.dim_cap = args.dim_cap
            report = execute(cfg, args.jobs, cache_dir, args.timings)
            _print_run(report, human)
            _emit(report, args.json_out)
            return exit_code([c["verdict"] for c in report["checks"]])
        text = args.config.read_text(encoding="utf-8") if args.config.exists() else None
        if text is None:
            raise ConfigError("cannot read config", None, str(args.config))
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.dim_cap is not None:
            overrides["dim_cap"] = args.dim_cap
        report = sweep(text, args.grid, str(args.config), args.jobs, cache_dir, args.timings, overrides)
        _print_sweep(report, human)
        _emit(report, args.json_out)
        return exit_code([r["summary"]["overall"] for r in report["points"]])
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DimensionCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
