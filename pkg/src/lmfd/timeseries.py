"""Loading, validation, z-normalization, and monotonicity filtering of tables."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from .errors import (
    ConstantSeriesWarning,
    DuplicateColumn,
    EmptyResult,
    LmfdError,
    MissingValue,
    NonMonotonicIndex,
)
from .metrics import abs_monotonicity


@dataclass(frozen=True)
class TimeSeriesTable:
    """An ordered time index plus named float series of equal length.

    Invariants (checked at construction): every column has the same length
    n >= 3, the index is strictly increasing, all values are finite, and
    sensor names are unique and non-empty.
    """

    index: np.ndarray
    columns: dict[str, np.ndarray]
    provenance: str = "unknown"

    def __post_init__(self):
        object.__setattr__(self, "index", np.asarray(self.index, dtype=np.float64))
        cols = {}
        n = self.index.shape[0]
        if n < 3:
            raise LmfdError(f"a table needs at least 3 rows, got {n}")
        if not np.all(np.diff(self.index) > 0):
            raise NonMonotonicIndex("index is not strictly increasing")
        for name, values in self.columns.items():
            if not name:
                raise LmfdError("sensor names must be non-empty")
            arr = np.asarray(values, dtype=np.float64)
            if arr.shape[0] != n:
                raise LmfdError(
                    f"column {name!r} has length {arr.shape[0]}, index has {n}"
                )
            if not np.isfinite(arr).all():
                raise LmfdError(f"column {name!r} contains non-finite values")
            cols[name] = arr
        object.__setattr__(self, "columns", cols)

    @property
    def n(self) -> int:
        return self.index.shape[0]

    @property
    def names(self) -> list[str]:
        return list(self.columns)


def _parse_time_cell(cell: str, row: int, column: str) -> float:
    text = cell.strip()
    try:
        return float(int(text))
    except ValueError:
        pass
    try:
        return datetime.fromisoformat(text).timestamp()
    except ValueError:
        raise MissingValue(row, column, cell) from None


def _parse_float_cell(cell: str, row: int, column: str) -> float:
    text = cell.strip()
    if not text:
        raise MissingValue(row, column, cell)
    try:
        value = float(text)
    except ValueError:
        raise MissingValue(row, column, cell) from None
    if not math.isfinite(value):
        raise MissingValue(row, column, cell)
    return value


def load_csv(path: str | Path, time_column: str | None = None) -> TimeSeriesTable:
    """Load an RFC-4180 CSV with a header row into a :class:`TimeSeriesTable`.

    ``time_column`` names the index column (integer or ISO-8601 values); when
    omitted, rows are indexed by position 0..n-1 and every column is data.
    Empty, unparseable, or non-finite cells are rejected, never imputed.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise LmfdError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        seen = set()
        for name in header:
            if name in seen:
                raise DuplicateColumn(f"{path}: duplicate column {name!r}")
            seen.add(name)
        if time_column is not None and time_column not in header:
            raise LmfdError(f"{path}: time column {time_column!r} not in header")

        data_names = [h for h in header if h != time_column]
        index: list[float] = []
        series: dict[str, list[float]] = {name: [] for name in data_names}
        for row_num, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise LmfdError(
                    f"{path}: row {row_num} has {len(row)} cells, expected {len(header)}"
                )
            for name, cell in zip(header, row):
                if name == time_column:
                    index.append(_parse_time_cell(cell, row_num, name))
                else:
                    series[name].append(_parse_float_cell(cell, row_num, name))

    n = len(next(iter(series.values()))) if series else 0
    if time_column is None:
        index = list(range(n))
    idx = np.asarray(index, dtype=np.float64)
    if not np.all(np.diff(idx) > 0):
        raise NonMonotonicIndex(f"{path}: column {time_column!r} is not strictly increasing")
    return TimeSeriesTable(
        index=idx,
        columns={name: np.asarray(vals) for name, vals in series.items()},
        provenance=str(path),
    )


def z_normalize(table: TimeSeriesTable) -> TimeSeriesTable:
    """Rescale each column to mean 0 and population standard deviation 1.

    Columns with zero standard deviation carry no signal and are dropped with
    a :class:`ConstantSeriesWarning` rather than aborting the run.
    """
    normalized: dict[str, np.ndarray] = {}
    for name, values in table.columns.items():
        sigma = float(values.std())  # population std (ddof=0)
        if sigma == 0.0:
            warnings.warn(
                f"column {name!r} is constant and was excluded",
                ConstantSeriesWarning,
                stacklevel=2,
            )
            continue
        normalized[name] = (values - values.mean()) / sigma
    return TimeSeriesTable(
        index=table.index, columns=normalized, provenance=table.provenance
    )


def filter_by_monotonicity(
    table: TimeSeriesTable, threshold: float
) -> tuple[TimeSeriesTable, list[tuple[str, float]]]:
    """Drop columns that are already monotonic beyond ``threshold``.

    Keeps exactly the columns with |rho| <= threshold (column order
    preserved) and returns the dropped (name, |rho|) pairs.  Raises
    :class:`EmptyResult` when fewer than two columns survive, since the
    search needs sensor pairs.
    """
    if not 0.0 <= threshold <= 1.0:
        raise LmfdError(f"threshold must lie in [0, 1], got {threshold}")
    kept: dict[str, np.ndarray] = {}
    dropped: list[tuple[str, float]] = []
    for name, values in table.columns.items():
        score = abs_monotonicity(values)
        if score <= threshold:
            kept[name] = values
        else:
            dropped.append((name, score))
    if len(kept) < 2:
        raise EmptyResult(threshold, list(kept))
    kept_table = TimeSeriesTable(
        index=table.index, columns=kept, provenance=table.provenance
    )
    return kept_table, dropped
