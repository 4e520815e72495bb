"""Verification reports (schema report/v1): one record per check."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

SCHEMA = "report/v1"


@dataclass
class Check:
    name: str
    paper_ref: str
    status: str
    exact_or_numeric: str
    residual: object
    tolerance: float | None = None
    witnesses: dict = field(default_factory=dict)
    runtime: float = 0.0

    def __post_init__(self):
        if self.status not in ("pass", "fail", "skip"):
            raise ValueError(f"bad status {self.status!r}")
        if self.exact_or_numeric not in ("exact", "numeric"):
            raise ValueError(f"bad kind {self.exact_or_numeric!r}")
        if self.exact_or_numeric == "exact" and self.tolerance is not None:
            raise ValueError("exact checks carry no tolerance")

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class Report:
    command: str
    settings: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def add(self, check: Check) -> Check:
        if any(c.name == check.name for c in self.checks):
            raise ValueError(f"duplicate check name {check.name!r}")
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        for c in other.checks:
            self.add(c)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "settings": self.settings,
            "ok": self.ok,
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_jsonable)

    def to_text(self) -> str:
        lines = [f"{SCHEMA} {self.command}"]
        for k, v in self.settings.items():
            lines.append(f"  {k}: {v}")
        for c in self.checks:
            tol = "" if c.tolerance is None else f" tol={c.tolerance:g}"
            lines.append(f"[{c.status.upper():4}] {c.name} ({c.exact_or_numeric}) residual={_fmt(c.residual)}{tol}"
                         f" [{c.runtime:.2f}s]")
            lines.append(f"         ref: {c.paper_ref}")
            if c.status != "pass" and c.witnesses:
                lines.append(f"         witnesses: {json.dumps(c.witnesses, default=_jsonable)[:400]}")
        npass = sum(c.passed for c in self.checks)
        lines.append(f"{npass}/{len(self.checks)} checks passed; {'OK' if self.ok else 'FAILED'}")
        return "\n".join(lines)


def _fmt(r) -> str:
    if isinstance(r, float):
        return f"{r:.3e}"
    return str(r)


def _jsonable(x):
    if hasattr(x, "tolist"):
        return x.tolist()
    if isinstance(x, complex):
        return [x.real, x.imag]
    return str(x)


class Timer:
    def __init__(self):
        self.elapsed = 0.0


@contextmanager
def timed():
    t = Timer()
    start = time.perf_counter()
    try:
        yield t
    finally:
        t.elapsed = time.perf_counter() - start


def exact_check(name, ref, ok: bool, residual, witnesses=None, runtime=0.0) -> Check:
    return Check(name, ref, "pass" if ok else "fail", "exact", residual, None, witnesses or {}, runtime)


def numeric_check(name, ref, residual: float, tol: float, witnesses=None, runtime=0.0, above=False) -> Check:
    """Numeric check: passes if residual < tol, or residual > tol when ``above`` (negative controls)."""
    residual = float(residual)
    ok = residual > tol if above else residual < tol
    return Check(name, ref, "pass" if ok else "fail", "numeric", residual, tol, witnesses or {}, runtime)
