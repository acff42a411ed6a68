"""Verification reports: named checks with witnesses and residuals.

Every verifier in the library returns a :class:`VerificationReport`
instead of raising on mathematical failure, so callers (and the CLI)
can see which axiom broke, where, and by how much.  A check's status is
``pass``, ``fail``, or ``probe-pass`` — the last is reserved for
Monte-Carlo verdicts that were sampled rather than proven.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
PROBE_PASS = "probe-pass"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    witness: object = None
    residual: object = None

    @property
    def ok(self) -> bool:
        return self.status in (PASS, PROBE_PASS)


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, witness=None, residual=None, probe=False):
        status = (PROBE_PASS if probe else PASS) if ok else FAIL
        self.checks.append(CheckResult(name, status, witness, residual))
        return ok

    def merge(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            name = f"{prefix}{c.name}" if prefix else c.name
            self.checks.append(CheckResult(name, c.status, c.witness, c.residual))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def first_failure(self) -> CheckResult | None:
        fails = self.failures()
        return fails[0] if fails else None

    def summary(self) -> str:
        n = len(self.checks)
        bad = len(self.failures())
        if bad == 0:
            return f"{n} checks: all pass"
        return f"{n} checks: {bad} FAILED ({', '.join(c.name for c in self.failures()[:4])})"
