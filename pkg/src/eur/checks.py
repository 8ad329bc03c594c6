"""Verification records shared by all relation checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

STATUSES = ("pass", "fail", "divergent", "indeterminate")


@dataclass(frozen=True)
class RelationCheck:
    """One verified equality or inequality ``lhs (=|>=) rhs``.

    ``reference`` is a stable tag naming the relation being checked. Equalities
    compare ``|lhs/rhs - 1|`` against ``tolerance`` (or ``|lhs - rhs|`` when
    ``relative`` is False or ``rhs`` is zero); inequalities pass when
    ``lhs >= rhs - tolerance``.
    """

    name: str
    lhs: float
    rhs: float
    kind: str
    tolerance: float
    status: str
    reference: str
    relative: bool = True
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.kind not in ("equality", "inequality"):
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def ratio(self) -> float:
        if self.rhs == 0 or not math.isfinite(self.rhs) or not math.isfinite(self.lhs):
            return math.nan
        return self.lhs / self.rhs

    @property
    def absolute_gap(self) -> float:
        if not (math.isfinite(self.lhs) and math.isfinite(self.rhs)):
            return math.nan
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    @classmethod
    def equality(cls, name, lhs, rhs, tolerance, reference, relative=True, note=""):
        lhs, rhs = float(lhs), float(rhs)
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            ok = False
        elif relative and rhs != 0:
            ok = abs(lhs / rhs - 1.0) < tolerance
        else:
            ok = abs(lhs - rhs) < tolerance
        return cls(name, lhs, rhs, "equality", tolerance, "pass" if ok else "fail", reference, relative, note)

    @classmethod
    def inequality(cls, name, lhs, rhs, tolerance, reference, note=""):
        lhs, rhs = float(lhs), float(rhs)
        ok = math.isfinite(rhs) and not math.isnan(lhs) and lhs >= rhs - tolerance
        return cls(name, lhs, rhs, "inequality", tolerance, "pass" if ok else "fail", reference, False, note)

    @classmethod
    def divergent(cls, name, rhs, reference, kind="equality", lhs=math.nan, note=""):
        return cls(name, float(lhs), float(rhs), kind, math.nan, "divergent", reference, True, note)

    @classmethod
    def indeterminate(cls, name, rhs, reference, kind="equality", lhs=math.nan, note=""):
        return cls(name, float(lhs), float(rhs), kind, math.nan, "indeterminate", reference, True, note)

    def scaled(self, factor: float) -> "RelationCheck":
        """Re-evaluate with the tolerance multiplied by ``factor``."""
        if self.status in ("divergent", "indeterminate"):
            return self
        make = RelationCheck.equality if self.kind == "equality" else RelationCheck.inequality
        if self.kind == "equality":
            return make(self.name, self.lhs, self.rhs, self.tolerance * factor, self.reference, self.relative, self.note)
        return make(self.name, self.lhs, self.rhs, self.tolerance * factor, self.reference, self.note)
