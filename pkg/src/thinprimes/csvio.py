"""CSV artifacts: UTF-8, comma-separated, header row, stable float text.

Floats are printed with 17 significant digits so that parsing the text
back recovers the exact double; reruns of a deterministic driver therefore
produce byte-identical files.  Line endings are forced to "\n".
"""

from __future__ import annotations

import csv
import math
from pathlib import Path


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    if isinstance(value, complex):
        raise TypeError("split complex values into _re/_im columns upstream")
    # numpy scalars land here
    if hasattr(value, "item"):
        return format_cell(value.item())
    raise TypeError(f"cannot format {type(value).__name__} cell")


def format_rows(rows: list) -> list:
    return [[format_cell(c) for c in row] for row in rows]


def write_csv(path: str | Path, columns: list, rows: list) -> None:
    """Write pre-formatted or raw rows; raw cells go through format_cell."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else format_cell(c)
                             for c in row])


def read_csv(path: str | Path):
    """Return (columns, rows) with every cell kept as its string form."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            columns = next(reader)
        except StopIteration:
            raise ValueError(f"empty CSV file: {path}")
        rows = [row for row in reader]
    return columns, rows
