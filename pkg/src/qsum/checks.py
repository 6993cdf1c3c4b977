"""Outcome records for single verifications and whole runs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .exact import LaurentPoly

VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
SKIPPED = "skipped"

REPORT_SCHEMA = "qsum-report/1"


def jsonable(value: Any) -> Any:
    """Convert witness payloads to JSON-safe data.

    Integers become decimal strings because they routinely exceed 64 bits;
    polynomials become ``[[exponent, "coefficient"], ...]``.
    """
    if isinstance(value, LaurentPoly):
        return value.to_pairs()
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return f"{value.numerator}/{value.denominator}"
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)


@dataclass
class CheckResult:
    """One verification: ``status`` is verified, counterexample or skipped."""

    check: str
    params: dict
    status: str
    witness: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != COUNTEREXAMPLE

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "id": self.check,
            "params": jsonable(self.params),
            "status": self.status,
            "witness": jsonable(self.witness),
            "wall_time": round(self.wall_time, 6),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CheckResult":
        return cls(
            check=data["id"],
            params=data["params"],
            status=data["status"],
            witness=data["witness"],
            wall_time=data["wall_time"],
        )


def verified(check: str, params: dict, **witness) -> CheckResult:
    return CheckResult(check, params, VERIFIED, witness)


def counterexample(check: str, params: dict, **witness) -> CheckResult:
    return CheckResult(check, params, COUNTEREXAMPLE, witness)


def skipped(check: str, params: dict, **witness) -> CheckResult:
    return CheckResult(check, params, SKIPPED, witness)


def expect_equal(check: str, params: dict, lhs, rhs, **extra) -> CheckResult:
    if lhs == rhs:
        return verified(check, params, **extra)
    return counterexample(check, params, lhs=lhs, rhs=rhs, **extra)


@dataclass
class Report:
    tool_version: str
    config: dict
    records: list[CheckResult] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {VERIFIED: 0, COUNTEREXAMPLE: 0, SKIPPED: 0}
        for rec in self.records:
            counts[rec.status] += 1
        counts["total"] = len(self.records)
        return counts

    @property
    def ok(self) -> bool:
        return all(rec.ok for rec in self.records)

    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def counterexamples(self) -> list[CheckResult]:
        return [r for r in self.records if r.status == COUNTEREXAMPLE]

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "tool_version": self.tool_version,
            "config": jsonable(self.config),
            "checks": [r.to_json() for r in self.records],
            "summary": self.summary,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        if data.get("schema") != REPORT_SCHEMA:
            raise ValueError(f"unknown report schema {data.get('schema')!r}")
        return cls(
            tool_version=data["tool_version"],
            config=data["config"],
            records=[CheckResult.from_json(c) for c in data["checks"]],
        )

    @classmethod
    def loads(cls, text: str) -> "Report":
        return cls.from_json(json.loads(text))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Report):
            return NotImplemented
        return self.to_json() == other.to_json()


__all__ = [
    "VERIFIED",
    "COUNTEREXAMPLE",
    "SKIPPED",
    "CheckResult",
    "Report",
    "verified",
    "counterexample",
    "skipped",
    "expect_equal",
    "jsonable",
]
