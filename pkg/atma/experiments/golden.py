"""
Golden Checks
Compares emitted rows against the expected values declared in an
experiment config. Comparisons run on parsed numbers, never on strings.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..config.loader import GoldenCheck

SLACK = 1e-12


def numeric(value: Any) -> Optional[float]:
    if value is None or value == "":
        return None
    if isinstance(value, (bool, int, float, Fraction)):
        return float(value)
    try:
        return float(Fraction(str(value)))
    except (ValueError, ZeroDivisionError):
        return None


def compare(value: float, check: GoldenCheck) -> bool:
    expected, tol = check.expected, check.tolerance
    if check.op == "approx":
        return abs(value - expected) <= tol + SLACK
    if check.op == "ge":
        return value >= expected - tol
    if check.op == "gt":
        return value > expected - tol
    if check.op == "le":
        return value <= expected + tol
    return value < expected + tol


class GoldenCheckEngine:
    """
    Evaluates golden checks against result rows and keeps a record of
    every comparison for the summary and the JSON sidecar.
    """

    def __init__(self, checks: Optional[List[GoldenCheck]] = None):
        self.checks = checks or []
        self.passed: List[Dict[str, Any]] = []
        self.failed: List[Dict[str, Any]] = []

    def process_rows(self, rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        """Run every check; returns the failures of this call."""
        failures = []
        for check in self.checks:
            matching = [row for row in rows if check.matches(row)]
            if not matching:
                failures.append(self._record(check, None, "no matching rows"))
                continue
            for row in matching:
                value = numeric(row.get(check.column))
                if value is None:
                    failures.append(
                        self._record(check, row.get(check.column), "not a number")
                    )
                elif compare(value, check):
                    self.passed.append(self._entry(check, value, None))
                else:
                    failures.append(self._record(check, value, "out of tolerance"))
        return failures

    def _entry(self, check: GoldenCheck, actual: Any, reason: Optional[str]) -> Dict[str, Any]:
        return {
            "check": check.describe(),
            "column": check.column,
            "where": dict(check.where),
            "expected": check.expected,
            "tolerance": check.tolerance,
            "op": check.op,
            "actual": actual,
            "reason": reason,
        }

    def _record(self, check: GoldenCheck, actual: Any, reason: str) -> Dict[str, Any]:
        entry = self._entry(check, actual, reason)
        self.failed.append(entry)
        return entry

    @property
    def ok(self) -> bool:
        return not self.failed

    def get_golden_summary(self) -> Dict[str, Any]:
        return {
            "checks": len(self.checks),
            "comparisons": len(self.passed) + len(self.failed),
            "passed": len(self.passed),
            "failed": len(self.failed),
            "failures": list(self.failed),
        }
