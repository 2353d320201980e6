"""
CSV Formatter
Renders experiment rows as a CSV table with a one-line header.
"""

import csv
import io
import math
from fractions import Fraction
from typing import Any, Dict, List


class CsvFormatter:
    """Formats result rows as deterministic CSV text"""

    def __init__(self, db_decimals: int = 4):
        if db_decimals < 0:
            raise ValueError("db_decimals must not be negative.")
        self.db_decimals = db_decimals

    def format_value(self, column: str, value: Any) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, (int, Fraction)):
            return str(value)
        if isinstance(value, float):
            if math.isnan(value):
                return "nan"
            if column.endswith("_db"):
                return f"{value:.{self.db_decimals}f}"
            return format(value, ".10g")
        return str(value)

    def format(self, columns: List[str], rows: List[Dict[str, Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([self.format_value(c, row.get(c)) for c in columns])
        return buffer.getvalue()
