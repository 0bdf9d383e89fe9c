"""Budgeted derivative-free fitting of equation constants.

The objective is the absolute Spearman correlation of the evaluated series
against the time index, treated as a black box over at most three constants.
Seeded uniform exploration and coordinate-wise refinement with a shrinking
step are interleaved in the budgeted ratio.  The probe at any position is a
deterministic function of the probes before it and of
(seed, structure_id, pair_id) alone, so the probe sequence does not depend on
the budget: results are reproducible, independent of scheduling, and a larger
budget can only improve the returned score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LmfdError
from .evaluation import Binding, evaluate
from .grammar import ConstSlot, EquationStructure
from .metrics import abs_monotonicity

_MIN_STEP = 1e-9


@dataclass(frozen=True)
class FitBudget:
    """Evaluation budget and seeding for one constant fit."""

    max_evaluations: int = 200
    seed: int = 42
    refinement_fraction: float = 0.5

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise LmfdError("max_evaluations must be >= 1")
        if not 0.0 < self.refinement_fraction < 1.0:
            raise LmfdError("refinement_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class FitResult:
    """Best constants found, their score, and how much budget was spent."""

    values: dict
    score: float
    evaluations_used: int
    valid: bool


def objective(
    structure: EquationStructure, s1, s2, values: dict
) -> float | None:
    """Score one constant assignment; None when the result is non-finite."""
    series, valid = evaluate(structure, Binding(s1=s1, s2=s2, constants=values))
    if not valid:
        return None
    return abs_monotonicity(series)


def _sample(rng: np.random.Generator, slots: tuple[ConstSlot, ...], n: int) -> dict:
    values = {}
    for slot in slots:
        if slot.kind == "continuous":
            values[slot.id] = float(rng.uniform(-1.0, 1.0))
        else:
            # log-uniform across {1..n-1}: spans matter on a ratio scale
            span = int(round(math.exp(rng.uniform(0.0, math.log(n - 1)))))
            values[slot.id] = min(max(span, 1), n - 1)
    return values


def _step_value(slot: ConstSlot, value, direction: int, step: float, n: int):
    if slot.kind == "continuous":
        return min(1.0, max(-1.0, value + direction * step))
    move = max(1, round(step * n))
    return min(n - 1, max(1, value + direction * move))


class _Refiner:
    """Coordinate-wise moves around the incumbent with a shrinking step.

    One move per call; after a full sweep over all coordinates and directions
    without improvement, the step halves.  A new incumbent restarts the sweep
    (and an incumbent found by exploration also restores the initial step,
    since it opens a fresh neighborhood).
    """

    def __init__(self, slots: tuple[ConstSlot, ...], n: int):
        self.slots = slots
        self.n = n
        self.moves = [(slot, d) for slot in slots for d in (1, -1)]
        self.step = 0.5
        self.cursor = 0
        self.improved_in_sweep = False

    def restart(self, fresh_neighborhood: bool) -> None:
        self.cursor = 0
        self.improved_in_sweep = True
        if fresh_neighborhood:
            self.step = 0.5

    def next_probe(self, incumbent: dict) -> dict | None:
        for _ in range(2 * len(self.moves)):
            if self.cursor == len(self.moves):
                self.cursor = 0
                if not self.improved_in_sweep:
                    self.step *= 0.5
                    if self.step < _MIN_STEP:
                        return None
                self.improved_in_sweep = False
            slot, direction = self.moves[self.cursor]
            self.cursor += 1
            moved = _step_value(slot, incumbent[slot.id], direction, self.step, self.n)
            if moved != incumbent[slot.id]:
                candidate = dict(incumbent)
                candidate[slot.id] = moved
                return candidate
        return None  # every move clips onto the incumbent


def fit_constants(
    structure: EquationStructure,
    s1,
    s2,
    budget: FitBudget,
    pair_id: int = 0,
) -> FitResult:
    """Maximize the absolute-Spearman objective over the structure's slots.

    Of a budget of B probes, ceil((1 - refinement_fraction) * B) are seeded
    samples (uniform for continuous slots, log-uniform for span slots) and
    the rest are refinement moves around the incumbent; a refinement probe
    falls back to sampling while no finite-scoring incumbent exists or the
    step has bottomed out.  Invalid (non-finite) probes consume budget; if no
    probe ever scores, the result is marked invalid.  The search stops early
    only when the score reaches 1.0, which no probe can beat.
    """
    slots = structure.slots
    if not slots:
        raise LmfdError(
            f"structure {structure.structure_id} has no constants to fit; "
            "score it directly with objective()"
        )
    s1 = np.ascontiguousarray(s1, dtype=np.float64)
    s2 = np.ascontiguousarray(s2, dtype=np.float64)
    n = s1.shape[0]
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((budget.seed, structure.structure_id, pair_id)))
    )
    refiner = _Refiner(slots, n)
    rf = budget.refinement_fraction

    best_values: dict | None = None
    best_score = -1.0
    evals = 0
    for i in range(1, budget.max_evaluations + 1):
        refine_turn = math.floor(i * rf) > math.floor((i - 1) * rf)
        candidate = None
        is_refinement = False
        if refine_turn and best_values is not None:
            candidate = refiner.next_probe(best_values)
            is_refinement = candidate is not None
        if candidate is None:
            candidate = _sample(rng, slots, n)
        score = objective(structure, s1, s2, candidate)
        evals += 1
        if score is not None and score > best_score:
            best_values = candidate
            best_score = score
            if is_refinement:
                refiner.improved_in_sweep = True
            else:
                refiner.restart(fresh_neighborhood=True)
            if best_score >= 1.0:
                break

    if best_values is None:
        return FitResult(values={}, score=0.0, evaluations_used=evals, valid=False)
    return FitResult(
        values=dict(best_values),
        score=best_score,
        evaluations_used=evals,
        valid=True,
    )
