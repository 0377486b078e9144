"""Certificate reports: named checks with exact witness values."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import format_rational

PASS = "PASS"
FAIL = "FAIL"
EXPECTED_MEMBER = "EXPECTED-MEMBER"

# statuses that do not take part in the overall verdict
NEUTRAL = frozenset({EXPECTED_MEMBER})


def render(value: Any) -> Any:
    """Convert witness values to JSON-ready data, rationals as strings."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if hasattr(value, "to_strings"):
        return value.to_strings()
    return str(value)


@dataclass
class Check:
    name: str
    status: str
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": render(self.witness)}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    header: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, **witness) -> Check:
        check = Check(name, PASS if ok else FAIL, witness)
        self.checks.append(check)
        return check

    def add_status(self, name: str, status: str, **witness) -> Check:
        check = Check(name, status, witness)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness))

    @property
    def status(self) -> str:
        return PASS if self.passed else FAIL

    @property
    def passed(self) -> bool:
        return all(c.status in NEUTRAL or c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status not in NEUTRAL and not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "header": render(self.header),
            "overall": self.status,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def summary_lines(self) -> list[str]:
        return [f"{c.status:<15} {c.name}" for c in self.checks]
