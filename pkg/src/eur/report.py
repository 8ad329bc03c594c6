"""Verification reports: JSON emission with round-trip exact numbers and CSV field exports."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .checks import STATUSES, RelationCheck


class ReportError(OSError):
    """Report could not be written; the message names the path."""


@dataclass(frozen=True, eq=False)
class FieldExport:
    """Plot-ready field: ``values`` over ``x`` (1D) or over ``x`` and ``p`` (2D, values[i, j] at x_i, p_j)."""

    name: str
    x: np.ndarray
    values: np.ndarray
    p: np.ndarray | None = None

    @property
    def columns(self) -> tuple[str, ...]:
        return ("x", "value") if self.p is None else ("x", "p", "value")

    def rows(self) -> np.ndarray:
        if self.p is None:
            return np.column_stack([self.x, self.values])
        xx, pp = np.meshgrid(self.x, self.p, indexing="ij")
        return np.column_stack([xx.ravel(), pp.ravel(), np.asarray(self.values).ravel()])


@dataclass(eq=False)
class Report:
    scenario: str
    params: dict
    checks: list[RelationCheck] = field(default_factory=list)
    fields: list[FieldExport] = field(default_factory=list)
    runtime: float = 0.0

    def counts(self) -> dict[str, int]:
        out = dict.fromkeys(STATUSES, 0)
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def ok(self) -> bool:
        """True unless a check failed (divergent and indeterminate do not count as failures)."""
        return not any(c.failed for c in self.checks)

    def scaled(self, factor: float) -> "Report":
        return Report(self.scenario, dict(self.params), [c.scaled(factor) for c in self.checks], list(self.fields), self.runtime)

    def to_dict(self, field_files: dict[str, str] | None = None) -> dict:
        files = field_files or {}
        return {
            "scenario": self.scenario,
            "params": dict(sorted(self.params.items())),
            "checks": [check_record(c) for c in self.checks],
            "fields": [{"name": f.name, "columns": list(f.columns), "file": files.get(f.name)} for f in self.fields],
        }


def check_record(c: RelationCheck) -> dict:
    return {
        "name": c.name,
        "paper_ref": c.reference,
        "lhs": c.lhs,
        "rhs": c.rhs,
        "ratio": c.ratio,
        "gap": c.absolute_gap,
        "status": c.status,
    }


def _number(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return "%.17g" % v


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.number, np.bool_)):
        return _number(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits and non-finite numbers as null.

    Parsing the output and dumping it again reproduces it byte for byte.
    """
    return _encode(obj, indent, 0) + "\n"


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportError(f"cannot write report file {path}: {exc.strerror or exc}") from exc


def field_csv(f: FieldExport) -> str:
    lines = [",".join(f.columns)]
    for row in f.rows():
        lines.append(",".join("nan" if not math.isfinite(v) else "%.17g" % v for v in row))
    return "\n".join(lines) + "\n"


def emit_report(r: Report, fmt: str = "json", path: str | None = None) -> list[str]:
    """Write ``r`` and return the paths written.

    ``json`` writes a single file (``path`` may be a directory, in which case
    ``<scenario>.json`` is created there). ``csv`` treats ``path`` as a directory
    and writes ``<scenario>.json`` plus one ``<scenario>_<field>.csv`` per field.
    """
    if fmt not in ("json", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    if path is None:
        raise ValueError("emit_report needs an output path")
    if fmt == "json":
        target = os.path.join(path, f"{r.scenario}.json") if os.path.isdir(path) else path
        parent = os.path.dirname(target)
        if parent:
            try:
                os.makedirs(parent, exist_ok=True)
            except OSError as exc:
                raise ReportError(f"cannot create output directory {parent}: {exc.strerror or exc}") from exc
        _write(target, dumps(r.to_dict()))
        return [target]
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create output directory {path}: {exc.strerror or exc}") from exc
    written, files = [], {}
    for f in r.fields:
        name = f"{r.scenario}_{f.name}.csv"
        _write(os.path.join(path, name), field_csv(f))
        files[f.name] = name
        written.append(os.path.join(path, name))
    target = os.path.join(path, f"{r.scenario}.json")
    _write(target, dumps(r.to_dict(files)))
    return [target] + written
