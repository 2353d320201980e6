"""
Summary Formatter
Console summary of one experiment run
"""

from typing import Any, Dict, List, Optional

from ..experiments.base import VIOLATION_COLUMN


class SummaryFormatter:
    """Formats a short run summary for the terminal"""

    def __init__(self, max_rows: int = 12):
        self.max_rows = max_rows

    def format(
        self,
        name: str,
        columns: List[str],
        rows: List[Dict[str, Any]],
        golden: Optional[Dict[str, Any]] = None,
        formatter: Any = None,
    ) -> str:
        if not rows:
            return f"ℹ️  {name}: no sweep points, header-only table written"

        flagged = sum(1 for row in rows if row.get(VIOLATION_COLUMN))
        output = [f"📊 {name} | Rows: {len(rows)} | Violations: {flagged}"]

        shown = [c for c in columns if c != VIOLATION_COLUMN]
        output.append("  " + " | ".join(shown))
        for row in rows[: self.max_rows]:
            cells = [
                formatter.format_value(c, row.get(c)) if formatter else str(row.get(c, ""))
                for c in shown
            ]
            output.append("  " + " | ".join(cells))
        if len(rows) > self.max_rows:
            output.append(f"  … {len(rows) - self.max_rows} more rows")

        if golden and golden.get("checks"):
            if golden["failed"]:
                output.append(
                    f"❌ Golden checks: {golden['failed']} of "
                    f"{golden['comparisons']} comparisons failed"
                )
                for failure in golden["failures"]:
                    output.append(
                        f"   • {failure['check']}: got {failure['actual']} "
                        f"({failure['reason']})"
                    )
            else:
                output.append(
                    f"✅ Golden checks: {golden['passed']} comparisons passed"
                )
        return "\n".join(output)
