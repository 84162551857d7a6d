"""Named-check reports shared by the verification routines and the CLI.

A report is a flat list of checks, each stating the claim it tests, the
expected and actual values as strings, and a pass flag.  JSON output is
deterministic except for the timing field.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    claim: str
    expected: str
    actual: str


@dataclass
class Report:
    command: str
    checks: list[Check] = field(default_factory=list)
    version: str = "0.1.0"
    elapsed_s: float = 0.0

    def add(self, name: str, passed: bool, claim: str, expected: object, actual: object) -> None:
        self.checks.append(Check(name, bool(passed), claim, str(expected), str(actual)))

    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def merge(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def to_text(self, verbose: bool = False) -> str:
        """One line per check; expected/actual shown on failure, or always
        when verbose (for query-style commands whose values are the point)."""
        lines = [f"# {self.command}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"[{status}] {c.name}: {c.claim}")
            if not c.passed:
                lines.append(f"       expected: {c.expected}")
                lines.append(f"       actual:   {c.actual}")
            elif verbose:
                lines.append(f"       {c.actual}")
        n_pass = sum(c.passed for c in self.checks)
        lines.append(f"{n_pass}/{len(self.checks)} checks passed ({self.elapsed_s:.2f}s)")
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "command": self.command,
            "checks": [
                {
                    "name": c.name,
                    "status": "pass" if c.passed else "fail",
                    "claim": c.claim,
                    "expected": c.expected,
                    "actual": c.actual,
                }
                for c in self.checks
            ],
            "elapsed_s": round(self.elapsed_s, 3),
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, data: str) -> "Report":
        obj = json.loads(data)
        rep = cls(command=obj["command"], version=obj["version"], elapsed_s=obj["elapsed_s"])
        for c in obj["checks"]:
            rep.add(c["name"], c["status"] == "pass", c["claim"], c["expected"], c["actual"])
        return rep
