"""
CSV Export

Byte-stable CSV emission for every subcommand:
- header row, fixed column order given by the command
- numbers at 12 significant digits
- LF line endings, on every platform
"""

from __future__ import annotations
import csv
import io
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

logger = logging.getLogger("fading_limits.export")

SIGNIFICANT_DIGITS = 12


def format_value(value: Any) -> str:
    """Render one cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "ok" if value else "FAIL"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if value == 0.0:
            return "0"
        return format(value, f".{SIGNIFICANT_DIGITS}g")
    return str(value)


def to_csv(fieldnames: List[str], rows: Iterable[Dict[str, Any]]) -> str:
    output = io.StringIO()
    writer = csv.DictWriter(output, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: format_value(row.get(key)) for key in fieldnames})
    return output.getvalue()


def emit(text: str, output: Optional[Path] = None) -> None:
    """Write CSV text to `output`, or to stdout when no path is given."""
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info(f"wrote {text.count(chr(10)) - 1} rows to {output}")
