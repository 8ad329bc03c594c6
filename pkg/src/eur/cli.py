"""Command-line driver: ``eur run``, ``eur verify`` and ``eur list``."""

from __future__ import annotations

import argparse
import os
import sys

from .report import ReportError, dumps, emit_report
from .scenarios import REGISTRY, ScenarioError, ScenarioSpec, run_scenario

CONFIG_KEYS = {"grid-n", "hbar", "seed", "out", "format", "tol-scale", "param"}


class ConfigError(ValueError):
    pass


def read_config(path: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments). ``param`` may repeat, as ``param = k=v``."""
    out: dict = {"param": []}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("_", "-")
        if not sep or key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{num}: expected one of {', '.join(sorted(CONFIG_KEYS))} as 'key = value'")
        value = value.strip()
        if key == "param":
            out["param"].append(value)
        else:
            out[key] = value
    return out


def _parse_params(items) -> dict:
    params = {}
    for item in items:
        k, sep, v = item.partition("=")
        if not sep or not k.strip():
            raise ScenarioError(f"--param expects k=v, got {item!r}")
        params[k.strip()] = v.strip()
    return params


def _settings(args) -> dict:
    """Merge flags over config-file values."""
    cfg = read_config(args.config) if args.config else {"param": []}
    merged = {
        "grid_n": args.grid_n if args.grid_n is not None else cfg.get("grid-n"),
        "hbar": args.hbar if args.hbar is not None else cfg.get("hbar", 1.0),
        "seed": args.seed if args.seed is not None else cfg.get("seed"),
        "out": args.out if args.out is not None else cfg.get("out"),
        "format": args.format or cfg.get("format", "json"),
        "tol_scale": args.tol_scale if args.tol_scale is not None else cfg.get("tol-scale", 1.0),
        "params": _parse_params(cfg["param"] + list(getattr(args, "param", None) or [])),
    }
    try:
        merged["grid_n"] = None if merged["grid_n"] is None else int(merged["grid_n"])
        merged["seed"] = None if merged["seed"] is None else int(merged["seed"])
        merged["hbar"] = float(merged["hbar"])
        merged["tol_scale"] = float(merged["tol_scale"])
    except ValueError as exc:
        raise ConfigError(f"bad setting: {exc}") from None
    if merged["format"] not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {merged['format']!r}")
    if not merged["tol_scale"] > 0:
        raise ConfigError("tol-scale must be positive")
    return merged


def _summary(report) -> str:
    c = report.counts()
    return f"{report.scenario}: " + ", ".join(f"{v} {k}" for k, v in c.items()) + ("" if report.ok else "  FAILED")


def _spec(name: str, s: dict, params: dict | None = None) -> ScenarioSpec:
    return ScenarioSpec(name, params if params is not None else s["params"], s["grid_n"], s["hbar"], s["seed"], s["tol_scale"])


def cmd_run(args) -> int:
    s = _settings(args)
    report = run_scenario(_spec(args.scenario, s))
    if s["out"]:
        for path in emit_report(report, s["format"], s["out"]):
            print(f"wrote {path}", file=sys.stderr)
    elif s["format"] == "csv":
        raise ConfigError("csv output needs --out DIR")
    else:
        sys.stdout.write(dumps(report.to_dict()))
    print(_summary(report), file=sys.stderr)
    return 0 if report.ok else 1


def cmd_verify(args) -> int:
    s = _settings(args)
    names = sorted(REGISTRY) if args.all else args.scenarios
    if not names:
        raise ScenarioError("name scenarios to verify or pass --all")
    if s["params"] and len(names) > 1:
        raise ScenarioError("--param applies to a single scenario")
    failed = False
    for name in names:
        report = run_scenario(_spec(name, s))
        print(_summary(report))
        for c in report.checks:
            if c.failed:
                print(f"  FAIL {c.name}: lhs={c.lhs:.12g} rhs={c.rhs:.12g} [{c.reference}]")
        if s["out"]:
            os.makedirs(s["out"], exist_ok=True)
            emit_report(report, "json", os.path.join(s["out"], f"{name}.json"))
        failed |= not report.ok
    print("FAIL" if failed else "OK")
    return 1 if failed else 0


def cmd_list(args) -> int:
    for name in sorted(REGISTRY):
        sc = REGISTRY[name]
        defaults = " ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in sc.defaults.items())
        grid = f" grid-n={sc.grid_n}" if sc.grid_n else ""
        seed = f" seed={sc.seed}" if sc.seed is not None else ""
        print(f"{name:20s} {sc.summary}")
        print(f"{'':20s}   {defaults}{grid}{seed}")
    return 0


def _common(p: argparse.ArgumentParser):
    p.add_argument("--grid-n", type=int, default=None, help="grid size (default: scenario value or $EUR_DEFAULT_GRID_N)")
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output file (json) or directory (csv, verify)")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--tol-scale", type=float, default=None, help="multiply every tolerance by T")
    p.add_argument("--config", default=None, help="file of 'key = value' lines with the same keys as the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eur", description="Verify exact uncertainty relations numerically.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and emit its report")
    run.add_argument("scenario")
    run.add_argument("--param", action="append", default=[], metavar="K=V")
    _common(run)
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="run scenarios; exit nonzero iff a check fails")
    ver.add_argument("scenarios", nargs="*")
    ver.add_argument("--all", action="store_true")
    ver.add_argument("--param", action="append", default=[], metavar="K=V")
    _common(ver)
    ver.set_defaults(func=cmd_verify)

    lst = sub.add_parser("list", help="list scenarios and their defaults")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ConfigError, ReportError, ValueError) as exc:
        print(f"eur: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
