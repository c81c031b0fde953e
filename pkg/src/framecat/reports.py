"""Validation and check reports.

Every validator returns a Report listing the violated laws, each with a
small witness (an element, pair or triple of indices).  Validation is
layered: composite validators stop at the first failing layer so the
witnesses stay meaningful.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional


class WorkbenchError(Exception):
    """Base error for the workbench."""


class BoundExceeded(WorkbenchError):
    """A size guard was hit before running a check."""


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    detail: str = ""

    def __str__(self) -> str:
        msg = f"{self.law} witness={self.witness}"
        if self.detail:
            msg += f" ({self.detail})"
        return msg


@dataclass
class Report:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    layers_run: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law: str, witness: tuple, detail: str = "") -> None:
        self.violations.append(Violation(law, tuple(witness), detail))

    def extend(self, other: "Report") -> None:
        self.violations.extend(other.violations)
        self.layers_run.extend(other.layers_run)

    def laws(self) -> list[str]:
        return [v.law for v in self.violations]

    def summary(self) -> str:
        if self.ok:
            return f"{self.subject}: ok"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)


@dataclass(frozen=True)
class CheckReport:
    """One named check over one instance, as streamed by the CLI."""

    instance: str
    check: str
    status: str  # "pass" | "fail" | "skipped"
    witness: Optional[tuple] = None
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        tag = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}[self.status]
        msg = f"[{tag}] {self.instance} :: {self.check} ({self.seconds:.3f}s)"
        if self.status == "fail":
            msg += f" witness={self.witness}"
        if self.detail:
            msg += f" {self.detail}"
        return msg

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "instance": self.instance,
            "check": self.check,
            "status": self.status,
            "seconds": round(self.seconds, 6),
        }
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


def run_check(instance: str, check: str, fn: Callable[[], tuple[bool, Optional[tuple], str]]) -> CheckReport:
    t0 = time.perf_counter()
    ok, witness, detail = fn()
    dt = time.perf_counter() - t0
    return CheckReport(instance, check, "pass" if ok else "fail", witness, detail, dt)


def sort_reports(reports: Iterable[CheckReport]) -> list[CheckReport]:
    return sorted(reports, key=lambda r: (r.instance, r.check))
