"""CSV input of points and CSV output of traces, histograms and sweeps."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .geometry import as_points


def read_points_csv(path) -> np.ndarray:
    """Read ``x,y`` rows; a non-numeric first row is taken as a header."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{lineno}: expected two columns, got {row!r}")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if lineno == 1 and not rows:
                    continue
                raise ValueError(f"{path}:{lineno}: cannot parse {row!r} as numbers")
    return as_points(rows)


def write_points_csv(points, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("x", "y"))
        for x, y in np.asarray(points, dtype=float):
            w.writerow((repr(float(x)), repr(float(y))))


def write_trace_csv(trace: Iterable, path) -> None:
    from .solver import TraceRow

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TraceRow.CSV_FIELDS)
        for row in trace:
            w.writerow(row.csv_row())


def write_rows_csv(header: Sequence[str], rows: Iterable[Sequence], path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
