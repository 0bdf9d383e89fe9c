"""Generator for the artificial two-sensor benchmark dataset.

Both series are dominated by a slow sine wave, so neither is very monotonic
on its own, but one carries a slight linear trend on top.  With the right
combination the periodic parts cancel and the trend remains, which is
exactly what the search is supposed to find.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LmfdError
from .timeseries import TimeSeriesTable


@dataclass(frozen=True)
class SynthConfig:
    """Size, seed, and noise level for the artificial dataset."""

    n: int = 1000
    seed: int = 42
    noise_sigma: float = 0.01

    def __post_init__(self):
        if self.n < 3:
            raise LmfdError("n must be >= 3")
        if self.noise_sigma < 0:
            raise LmfdError("noise_sigma must be >= 0")


def _gaussian_pairs(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Two independent standard-normal vectors via Box-Muller over PCG64.

    Box-Muller on the raw uniform stream keeps the draw sequence stable
    across platforms and numpy versions, so seeded fixtures are byte-for-byte
    reproducible.
    """
    u1 = 1.0 - rng.random(n)  # (0, 1]; log(0) guard
    u2 = rng.random(n)
    radius = np.sqrt(-2.0 * np.log(u1))
    return radius * np.cos(2.0 * math.pi * u2), radius * np.sin(2.0 * math.pi * u2)


def generate_artificial(config: SynthConfig) -> TimeSeriesTable:
    """Build the two-sensor benchmark table.

    s1 = (1 + sin(x/100))^4 + noise   (periodic, nearly trend-free)
    s2 = sin(x/100) + x/300 + noise   (periodic with a slight rising trend)

    for x = 0..n-1, with Gaussian noise of standard deviation
    ``config.noise_sigma``.  The same seed always yields the same table.
    """
    x = np.arange(config.n, dtype=np.float64)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    eps1, eps2 = _gaussian_pairs(rng, config.n)
    s1 = (1.0 + np.sin(x / 100.0)) ** 4 + config.noise_sigma * eps1
    s2 = np.sin(x / 100.0) + x / 300.0 + config.noise_sigma * eps2
    return TimeSeriesTable(
        index=x, columns={"s1": s1, "s2": s2}, provenance="synthetic"
    )


def write_csv(table: TimeSeriesTable, path) -> None:
    """Write the table's data columns in the CSV format ``load_csv`` reads.

    No index column is written; rows are consumed positionally, so the file
    feeds straight into discovery without extra flags.
    """
    names = table.names
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(",".join(names) + "\n")
        for i in range(table.n):
            handle.write(",".join(repr(float(table.columns[c][i])) for c in names) + "\n")
