"""Residual reports shared by every verification routine."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    """One named check.

    ``mode`` is ``"le"`` (value must not exceed ``threshold``), ``"ge"``
    (value must reach it), ``"eq"`` (integer equality) or ``"info"`` (never
    fails; carried for the record).
    """

    name: str
    value: float
    threshold: float
    mode: str = "le"
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.mode == "info":
            return True
        if isinstance(self.value, float) and math.isnan(self.value):
            return False
        if self.mode == "le":
            return self.value <= self.threshold
        if self.mode == "ge":
            return self.value >= self.threshold
        if self.mode == "eq":
            return self.value == self.threshold
        raise ValueError(f"unknown mode {self.mode!r}")

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": _jsonable(self.value),
            "threshold": _jsonable(self.threshold),
            "mode": self.mode,
            "passed": self.passed,
            **({"note": self.note} if self.note else {}),
        }


def _jsonable(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, str)) or v is None:
        return v
    v = float(v)
    return v if math.isfinite(v) else str(v)


@dataclass
class Report:
    """An ordered collection of checks with an overall verdict."""

    title: str
    checks: list[Check] = field(default_factory=list)
    tol: float = DEFAULT_TOL

    def le(self, name: str, value: float, threshold: float | None = None, note: str = "") -> Check:
        c = Check(name, float(value), self.tol if threshold is None else threshold, "le", note)
        self.checks.append(c)
        return c

    def ge(self, name: str, value: float, threshold: float, note: str = "") -> Check:
        c = Check(name, float(value), threshold, "ge", note)
        self.checks.append(c)
        return c

    def eq(self, name: str, value: int, expected: int, note: str = "") -> Check:
        c = Check(name, int(value), int(expected), "eq", note)
        self.checks.append(c)
        return c

    def info(self, name: str, value, note: str = "") -> Check:
        c = Check(name, value, float("nan"), "info", note)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str | None = None) -> "Report":
        pre = (prefix if prefix is not None else other.title)
        for c in other.checks:
            name = f"{pre}.{c.name}" if pre else c.name
            self.checks.append(Check(name, c.value, c.threshold, c.mode, c.note))
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def value(self, name: str):
        return self[name].value

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "tol": self.tol,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [f"== {self.title} (tol {self.tol:g})"]
        for c in self.checks:
            lines.append(_format_check(c))
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _format_check(c: Check) -> str:
    if c.mode == "info":
        return f"  info  {c.name}: {c.value}" + (f"  ({c.note})" if c.note else "")
    flag = "ok  " if c.passed else "FAIL"
    op = {"le": "<=", "ge": ">=", "eq": "=="}[c.mode]
    val = f"{c.value:.3e}" if c.mode != "eq" else str(c.value)
    thr = f"{c.threshold:.1e}" if c.mode != "eq" else str(c.threshold)
    return f"  {flag}  {c.name}: {val} {op} {thr}" + (f"  ({c.note})" if c.note else "")


def merge(title: str, parts: Iterable[Report], tol: float = DEFAULT_TOL) -> Report:
    out = Report(title, tol=tol)
    for p in parts:
        out.extend(p)
    return out
