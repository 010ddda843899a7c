"""Check results and the reports that collect them.

Verification routines return these instead of raising: a failed check is a
finding, not a crash, and callers decide what a failure costs them.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CheckResult:
    """One verified claim: what was checked, where, and what came out."""

    name: str
    subject: str
    classification: str
    ranks: dict
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)
