"""Problem files (JSON) and table files (CSV).

Problem file::

    {"rows": 3, "cols": 3,
     "table": [[7, 5, 1], [5, 10, 6], [2, 6, 8]],   # optional
     "subtable": [[1, 1], [2, 1]]}                   # 1-based cells

A CSV table has one line per row, entries separated by commas.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import InvalidInput
from .tables import Shape, SubtableMask, Table


@dataclass(frozen=True)
class Problem:
    shape: Shape
    mask: SubtableMask
    table: Optional[Table] = None

    def to_json(self) -> dict:
        out = {"rows": self.shape.rows, "cols": self.shape.cols}
        if self.table is not None:
            out["table"] = self.table.tolist()
        out["subtable"] = self.mask.to_one_based()
        return out


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInput(f"{what} must be an integer, got {value!r}")
    return value


def parse_problem(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise InvalidInput("problem must be a JSON object")
    for key in ("rows", "cols", "subtable"):
        if key not in data:
            raise InvalidInput(f"problem is missing {key!r}")
    shape = Shape(_int(data["rows"], "rows"), _int(data["cols"], "cols"))
    cells = data["subtable"]
    if not isinstance(cells, list):
        raise InvalidInput("subtable must be a list of [i, j] pairs")
    seen = set()
    for cell in cells:
        if not (isinstance(cell, list) and len(cell) == 2):
            raise InvalidInput(f"subtable cell {cell!r} is not an [i, j] pair")
        i, j = (_int(c, "subtable index") for c in cell)
        if (i, j) in seen:
            raise InvalidInput(f"duplicate subtable cell [{i}, {j}]")
        seen.add((i, j))
        if not (1 <= i <= shape.rows and 1 <= j <= shape.cols):
            raise InvalidInput(f"subtable cell [{i}, {j}] outside a {shape} table (indices are 1-based)")
    mask = SubtableMask.from_one_based(shape.rows, shape.cols, cells)
    table = None
    if data.get("table") is not None:
        table = parse_table_rows(data["table"])
        if table.shape != shape:
            raise InvalidInput(f"table is {table.shape} but problem declares {shape}")
    return Problem(shape, mask, table)


def parse_table_rows(rows) -> Table:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InvalidInput("table must be a non-empty list of rows")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise InvalidInput("table rows must all have the same non-zero length")
    for r in rows:
        for v in r:
            if _int(v, "table entry") < 0:
                raise InvalidInput(f"table entry {v} is negative")
    return Table(rows)


def load_problem(path) -> Problem:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from exc
    return parse_problem(data)


def read_table_csv(text: str) -> Table:
    rows = []
    for line in csv.reader(io.StringIO(text)):
        if not line or all(not c.strip() for c in line):
            continue
        try:
            rows.append([int(c) for c in line])
        except ValueError as exc:
            raise InvalidInput(f"bad CSV entry: {exc}") from exc
    return parse_table_rows(rows)


def load_table_csv(path) -> Table:
    return read_table_csv(Path(path).read_text())


def table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(table.tolist())
    return buf.getvalue()
