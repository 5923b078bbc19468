import csv
import io
import json
import math
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from utils.config import OUTPUT_DIGITS
from utils.shared_context import logger

LIST_SEPARATOR = ";"


def _round(value: float) -> Optional[float]:
    if not math.isfinite(value):
        return None
    return float(f"{value:.{OUTPUT_DIGITS}g}")


def csv_value(value: Any) -> str:
    """Cell text: 12 significant digits, lowercase booleans, ';'-joined lists, empty for NaN/inf."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{OUTPUT_DIGITS}g}" if math.isfinite(value) else ""
    if isinstance(value, (list, tuple, np.ndarray)):
        return LIST_SEPARATOR.join(csv_value(v) for v in value)
    return str(value)


def json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round(float(value))
    if isinstance(value, (list, tuple, np.ndarray)):
        return [json_value(v) for v in value]
    return value


def columns_of(rows: Iterable[Dict[str, Any]]) -> List[str]:
    """Union of row keys in first-seen order."""
    columns: List[str] = []
    for row in rows:
        columns.extend(key for key in row if key not in columns)
    return columns


def format_rows(rows: Sequence[Dict[str, Any]], fmt: str = "csv", columns: Optional[List[str]] = None) -> str:
    """Renders rows as an RFC-4180 CSV table or a JSON document {"rows": [...]}.

    An empty table still carries its header when columns are given.
    """
    columns = columns if columns is not None else columns_of(rows)
    if fmt == "json":
        document = {"rows": [{key: json_value(row.get(key)) for key in columns if key in row} for row in rows]}
        return json.dumps(document, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([csv_value(row.get(key)) for key in columns])
    return buffer.getvalue()


def emit_rows(rows: Sequence[Dict[str, Any]], fmt: str = "csv", out: Optional[str] = None,
              columns: Optional[List[str]] = None):
    """Writes the table to `out`, or to stdout when no path is given."""
    text = format_rows(rows, fmt, columns)
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", newline="", encoding="utf-8") as handle:
        handle.write(text)
    logger.info(f"Wrote {len(rows)} rows to {out}")


def parse_rows(text: str, fmt: str = "csv") -> List[Dict[str, Any]]:
    """Inverse of format_rows. CSV cells come back as strings, JSON values typed."""
    if fmt == "json":
        return json.loads(text)["rows"]
    return [dict(row) for row in csv.DictReader(io.StringIO(text))]


def read_rows(path: str, fmt: str = "csv") -> List[Dict[str, Any]]:
    with open(path, newline="", encoding="utf-8") as handle:
        return parse_rows(handle.read(), fmt)


def float_column(rows: Sequence[Dict[str, Any]], key: str) -> np.ndarray:
    """A numeric column as a float array; empty cells become NaN."""
    return np.array([float(row[key]) if row[key] not in ("", None) else np.nan for row in rows])


def exit_code(reports) -> int:
    """0 when every report passed, 1 otherwise."""
    return 0 if all(report.passed for report in reports) else 1
