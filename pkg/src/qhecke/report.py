"""Tiny check-report structure shared by all verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: str = ""
    counterexample: dict | None = None

    def as_dict(self):
        out = {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "details": self.details,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class Report:
    results: list = field(default_factory=list)

    def add(self, name, passed, details="", counterexample=None):
        self.results.append(CheckResult(name, passed, details, counterexample))

    def extend(self, results):
        self.results.extend(results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.passed]
