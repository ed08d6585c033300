"""Column-oriented result tables and their CSV / JSON emission."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

SIG_DIGITS = 12


def fmt(x) -> str:
    """Fixed 12-significant-digit rendering used for every emitted number."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x)
    if v == 0.0:
        return "0"  # folds -0.0
    return f"{v:.{SIG_DIGITS}g}"


@dataclass
class TimeSeries:
    """Named columns of equal length, emitted row by row."""

    columns: tuple[str, ...]
    data: dict[str, np.ndarray]

    @classmethod
    def from_columns(cls, cols: dict) -> "TimeSeries":
        names = tuple(cols)
        data = {k: np.asarray(v) for k, v in cols.items()}
        lengths = {len(v) for v in data.values()}
        if len(lengths) > 1:
            raise ValueError(f"ragged columns: {lengths}")
        return cls(names, data)

    def __len__(self) -> int:
        return len(self.data[self.columns[0]]) if self.columns else 0

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[name]

    def select(self, names) -> "TimeSeries":
        return TimeSeries(tuple(names), {k: self.data[k] for k in names})

    def rows(self):
        for i in range(len(self)):
            yield [self.data[k][i] for k in self.columns]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows():
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        records = [
            {k: json.loads(fmt(v)) for k, v in zip(self.columns, row)}
            for row in self.rows()
        ]
        return json.dumps(records, indent=1) + "\n"

    def render(self, format: str) -> str:
        if format == "csv":
            return self.to_csv()
        if format == "json":
            return self.to_json()
        raise ValueError(f"unknown output format {format!r}")
