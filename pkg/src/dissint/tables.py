"""Rectangular tables of real numbers and their CSV/JSON forms.

CSV: header row, comma separator, LF line endings, every value printed with
17 significant digits so that parsing restores the exact double.  JSON: an
object carrying ``schema_version``, ``mode``, ``columns`` and ``records``
(an array of column-to-value objects); non-finite values become ``null``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SCHEMA_VERSION = 1
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: np.ndarray
    mode: str = field(default="", compare=False)

    def __post_init__(self):
        cols = tuple(self.columns)
        if len(set(cols)) != len(cols):
            raise ValueError("duplicate column names")
        if any("," in c or "\n" in c or '"' in c for c in cols):
            raise ValueError("column names may not contain commas, quotes or newlines")
        rows = np.asarray(self.rows, dtype=float)
        if rows.size == 0:
            rows = rows.reshape(0, len(cols))
        if rows.ndim != 2 or rows.shape[1] != len(cols):
            raise ValueError(f"rows of shape {rows.shape} do not match {len(cols)} columns")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_records(cls, columns: Sequence[str], records: Sequence[Sequence[float]], mode: str = "") -> "ResultTable":
        return cls(tuple(columns), np.array(records, dtype=float).reshape(len(records), len(columns)), mode)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def __eq__(self, other):
        if not isinstance(other, ResultTable):
            return NotImplemented
        # bitwise comparison so NaN payloads and signed zeros count
        return (self.columns == other.columns and self.rows.shape == other.rows.shape
                and self.rows.tobytes() == other.rows.tobytes())


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit(table: ResultTable, fmt: str = "csv") -> str:
    if fmt == "csv":
        lines = [",".join(table.columns)]
        lines += [",".join(_fmt(x) for x in row) for row in table.rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        records = [
            {c: (float(x) if math.isfinite(x) else None) for c, x in zip(table.columns, row)}
            for row in table.rows
        ]
        doc = {
            "schema_version": SCHEMA_VERSION,
            "mode": table.mode,
            "columns": list(table.columns),
            "records": records,
        }
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def parse(text: str, fmt: str = "csv") -> ResultTable:
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader if row]
        return ResultTable.from_records(header, rows)
    if fmt == "json":
        doc = json.loads(text)
        cols = doc["columns"]
        rows = [[math.nan if r[c] is None else float(r[c]) for c in cols] for r in doc["records"]]
        return ResultTable.from_records(cols, rows, doc.get("mode", ""))
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
