"""lmfd: latent monotonic feature discovery.

Searches a canonical grammar of two-sensor equations for combinations whose
evaluated series is highly monotonic over time, ranking candidates by the
absolute Spearman rank correlation against the time index.  Such features can
serve as data-driven proxies for the hidden "age" of a monitored system.
"""

from ._kernels import BACKEND
from .errors import LmfdError
from .evaluation import Binding, EwmaKernel, evaluate, ewma
from .fit import FitBudget, FitResult, fit_constants, objective
from .grammar import ConstSlot, EquationStructure, enumerate_structures, get_structure, render
from .metrics import abs_monotonicity, rank, spearman_rho
from .parsing import parse
from .search import (
    CandidateInstance,
    SearchConfig,
    SearchReport,
    enumerate_candidates,
    run_search,
)
from .synth import SynthConfig, generate_artificial
from .timeseries import TimeSeriesTable, filter_by_monotonicity, load_csv, z_normalize

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Binding",
    "CandidateInstance",
    "ConstSlot",
    "EquationStructure",
    "EwmaKernel",
    "FitBudget",
    "FitResult",
    "LmfdError",
    "SearchConfig",
    "SearchReport",
    "SynthConfig",
    "TimeSeriesTable",
    "abs_monotonicity",
    "enumerate_candidates",
    "enumerate_structures",
    "evaluate",
    "ewma",
    "filter_by_monotonicity",
    "fit_constants",
    "generate_artificial",
    "get_structure",
    "load_csv",
    "objective",
    "parse",
    "rank",
    "render",
    "run_search",
    "spearman_rho",
    "z_normalize",
]
