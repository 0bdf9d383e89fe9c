"""Exhaustive search over (structure, ordered sensor pair) candidates.

Every unordered sensor pair is tried in both orientations because the
grammar's roles are asymmetric (only the second role's term carries the
addition scale, only the first role's functors appear on the left).  With m
sensors and 55 structures that is 110 * C(m, 2) candidates.  Scoring is an
embarrassingly parallel map with per-candidate seeding, merged by a stable
sort, so any worker count yields the identical report.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from itertools import combinations
from multiprocessing import Pool

import numpy as np

from .errors import TooFewSensors
from .evaluation import Binding, evaluate
from .fit import FitBudget, FitResult, fit_constants, objective
from .grammar import enumerate_structures, get_structure, render
from .metrics import abs_monotonicity
from .timeseries import TimeSeriesTable, filter_by_monotonicity, z_normalize


@dataclass(frozen=True)
class CandidateInstance:
    """One structure bound to an ordered sensor pair."""

    structure_id: int
    s1_name: str
    s2_name: str
    pair_id: int


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for one discovery run."""

    threshold: float = 1.0
    top_k: int = 5
    budget: FitBudget = field(default_factory=FitBudget)
    parallelism: int | str = "auto"

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")

    @property
    def jobs(self) -> int:
        if self.parallelism == "auto":
            return os.cpu_count() or 1
        return max(1, int(self.parallelism))


@dataclass(frozen=True)
class ResultRow:
    rank: int
    equation: str
    structure_id: int
    s1: str
    s2: str | None
    constants: dict
    abs_rho: float


@dataclass(frozen=True)
class SearchReport:
    """Ranked results plus everything needed to reproduce them."""

    config: dict
    kept_sensors: list[tuple[str, float]]
    dropped_sensors: list[tuple[str, float]]
    counts: dict
    results: list[ResultRow]
    wall_time_seconds: float

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "kept_sensors": [
                {"name": name, "abs_rho": rho} for name, rho in self.kept_sensors
            ],
            "dropped_sensors": [
                {"name": name, "abs_rho": rho} for name, rho in self.dropped_sensors
            ],
            "counts": self.counts,
            "results": [
                {
                    "rank": row.rank,
                    "equation": row.equation,
                    "structure_id": row.structure_id,
                    "s1": row.s1,
                    "s2": row.s2,
                    "constants": row.constants,
                    "abs_rho": row.abs_rho,
                }
                for row in self.results
            ],
            "wall_time_seconds": self.wall_time_seconds,
        }


def enumerate_candidates(sensor_names: list[str]) -> list[CandidateInstance]:
    """All candidates in deterministic order.

    Unordered pairs are walked in lexicographic name order; each yields both
    orientations (smaller name first), each crossed with all 55 structures in
    id order.  Total: 110 * C(m, 2).
    """
    if len(sensor_names) < 2:
        raise TooFewSensors(f"need at least 2 sensors, got {len(sensor_names)}")
    n_structures = len(enumerate_structures())
    candidates = []
    pair_id = 0
    for a, b in combinations(sorted(sensor_names), 2):
        for s1_name, s2_name in ((a, b), (b, a)):
            for sid in range(n_structures):
                candidates.append(
                    CandidateInstance(
                        structure_id=sid,
                        s1_name=s1_name,
                        s2_name=s2_name,
                        pair_id=pair_id,
                    )
                )
            pair_id += 1
    return candidates


# worker-process state, installed once per worker by _init_worker
_WORKER: dict = {}


def _init_worker(columns: dict[str, np.ndarray], budget: FitBudget) -> None:
    _WORKER["columns"] = columns
    _WORKER["budget"] = budget


def _score_candidate(task: tuple[int, int, str, str, int]):
    idx, sid, s1_name, s2_name, pair_id = task
    structure = get_structure(sid)
    s1 = _WORKER["columns"][s1_name]
    s2 = _WORKER["columns"][s2_name]
    if not structure.slots:
        score = objective(structure, s1, s2, {})
        if score is None:
            result = FitResult(values={}, score=0.0, evaluations_used=1, valid=False)
        else:
            result = FitResult(values={}, score=score, evaluations_used=1, valid=True)
    else:
        result = fit_constants(structure, s1, s2, _WORKER["budget"], pair_id=pair_id)
    return idx, result


def evaluate_result_series(
    table: TimeSeriesTable,
    structure_id: int,
    s1_name: str | None,
    s2_name: str | None,
    constants: dict,
) -> np.ndarray:
    """Recompute the proxy series for a reported result on a prepared table."""
    structure = get_structure(structure_id)
    binding = Binding(
        s1=table.columns[s1_name] if s1_name else None,
        s2=table.columns[s2_name] if s2_name else None,
        constants=constants,
    )
    series, _ = evaluate(structure, binding)
    return series


def run_search(table: TimeSeriesTable, config: SearchConfig) -> SearchReport:
    """z-normalize, filter, enumerate, fit, and rank.

    The report is identical for any worker count: every candidate's probe
    stream is derived from (seed, structure id, pair id) and the merge is a
    stable sort over candidate identity, never arrival order.
    """
    start = time.perf_counter()
    normalized = z_normalize(table)
    kept_table, dropped = filter_by_monotonicity(normalized, config.threshold)
    kept_names = kept_table.names
    kept_scores = {name: abs_monotonicity(kept_table.columns[name]) for name in kept_names}

    candidates = enumerate_candidates(kept_names)
    n_pairs = math.comb(len(kept_names), 2)

    tasks = [
        (i, c.structure_id, c.s1_name, c.s2_name, c.pair_id)
        for i, c in enumerate(candidates)
        if c.structure_id != 0
    ]
    outcomes: dict[int, FitResult] = {}
    jobs = config.jobs
    if jobs <= 1 or len(tasks) < 2:
        _init_worker(kept_table.columns, config.budget)
        for task in tasks:
            idx, result = _score_candidate(task)
            outcomes[idx] = result
    else:
        chunk = max(1, len(tasks) // (jobs * 8))
        with Pool(
            processes=jobs,
            initializer=_init_worker,
            initargs=(kept_table.columns, config.budget),
        ) as pool:
            for idx, result in pool.imap_unordered(_score_candidate, tasks, chunksize=chunk):
                outcomes[idx] = result

    # bare-sensor candidates: scored once per sensor, deduplicated in the report
    rows: list[tuple] = [
        (kept_scores[name], 0, name, None, {}) for name in sorted(kept_names)
    ]
    invalid = 0
    for i, candidate in enumerate(candidates):
        if candidate.structure_id == 0:
            continue
        result = outcomes[i]
        if not result.valid:
            invalid += 1
            continue
        rows.append(
            (
                result.score,
                candidate.structure_id,
                candidate.s1_name,
                candidate.s2_name,
                result.values,
            )
        )

    rows.sort(key=lambda r: (-r[0], r[1], r[2], r[3] or ""))
    results = []
    for rank, (score, sid, s1_name, s2_name, values) in enumerate(rows[: config.top_k], start=1):
        structure = get_structure(sid)
        results.append(
            ResultRow(
                rank=rank,
                equation=render(
                    structure,
                    s1_name=s1_name or "s1",
                    s2_name=s2_name or "s2",
                    values=values,
                ),
                structure_id=sid,
                s1=s1_name,
                s2=s2_name,
                constants=dict(values),
                abs_rho=score,
            )
        )

    wall = time.perf_counter() - start
    return SearchReport(
        config={
            "input": table.provenance,
            "threshold": config.threshold,
            "top_k": config.top_k,
            "max_evaluations": config.budget.max_evaluations,
            "seed": config.budget.seed,
            "refinement_fraction": config.budget.refinement_fraction,
        },
        kept_sensors=[(name, kept_scores[name]) for name in kept_names],
        dropped_sensors=dropped,
        counts={"pairs": n_pairs, "candidates": len(candidates), "invalid": invalid},
        results=results,
        wall_time_seconds=wall,
    )
