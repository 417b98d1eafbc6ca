"""Uniform result type for verification sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_RECORDED_FAILURES = 10


@dataclass
class CheckReport:
    """Outcome of one named verification sweep.

    ``failures`` holds at most the first few counterexamples (each a small
    JSON-able structure); ``checked`` counts every case examined.
    """

    name: str
    passed: bool
    checked: int
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def record_failure(self, case) -> None:
        self.passed = False
        if len(self.failures) < MAX_RECORDED_FAILURES:
            self.failures.append(case)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "info": self.info,
        }
