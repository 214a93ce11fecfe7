"""Structured pass/fail records shared by every checker."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

PASS, FAIL, SKIPPED, INFO = "pass", "fail", "skipped", "info"


@dataclass
class Check:
    check: str
    status: str
    degree: Optional[int] = None
    residual_leading_monomial: Optional[str] = None
    witness: Any = None
    detail: Any = None

    def to_json(self) -> dict:
        out = {"check": self.check, "status": self.status}
        if self.degree is not None:
            out["degree"] = self.degree
        if self.residual_leading_monomial is not None:
            out["residual_leading_monomial"] = self.residual_leading_monomial
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)

    def add(self, check: str, ok: bool, **kw) -> Check:
        c = Check(check, PASS if ok else FAIL, **kw)
        self.checks.append(c)
        return c

    def skip(self, check: str, reason: str, **kw) -> Check:
        c = Check(check, SKIPPED, detail=reason, **kw)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for c in other.checks:
            self.checks.append(Check(prefix + c.check, c.status, c.degree,
                                     c.residual_leading_monomial, c.witness, c.detail))
        return self

    def note(self, check: str, **kw) -> Check:
        """Informational entry that never fails the report."""
        c = Check(check, INFO, **kw)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if c.status == FAIL]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.check == name:
                return c
        raise KeyError(name)

    def status(self, name: str) -> str:
        return self.get(name).status

    def to_json(self) -> dict:
        return {"report": self.name, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def human(self) -> str:
        lines = [f"== {self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            extra = ""
            if c.status == FAIL and c.witness is not None:
                extra = f"  witness={c.witness}"
            if c.residual_leading_monomial:
                extra += f"  leading={c.residual_leading_monomial}"
            if c.status == SKIPPED:
                extra = f"  ({c.detail})"
            lines.append(f"  [{c.status:7}] {c.check}{extra}")
        return "\n".join(lines)
