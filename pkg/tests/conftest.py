import numpy as np
import pytest

from lmfd import SynthConfig, generate_artificial


@pytest.fixture(scope="session")
def artificial_table():
    return generate_artificial(SynthConfig(n=1000, seed=42))


@pytest.fixture()
def rng():
    return np.random.Generator(np.random.PCG64(12345))


def brute_force_rank(x):
    """O(n^2) fractional ranking, independent of the sort-based implementation."""
    x = np.asarray(x, dtype=float)
    out = np.empty(len(x))
    for i, v in enumerate(x):
        smaller = int(np.sum(x < v))
        equal = int(np.sum(x == v))
        out[i] = smaller + (equal + 1) / 2.0
    return out


def d_squared_rho(x, t):
    """Tie-free Spearman oracle: 1 - 6*sum(d^2) / (n(n^2-1))."""
    rx = brute_force_rank(x)
    rt = brute_force_rank(t)
    d = rx - rt
    n = len(x)
    return 1.0 - 6.0 * float(np.sum(d * d)) / (n * (n * n - 1))


def pearson_of_ranks_rho(x, t):
    """Tie-safe Spearman oracle: plain Pearson of brute-force average ranks."""
    rx = brute_force_rank(x)
    rt = brute_force_rank(t)
    return float(np.corrcoef(rx, rt)[0, 1])
