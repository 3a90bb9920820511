"""Derivative-free search over measurement phases (and optionally state
weights) for the maximal expression value.

The search is a seeded random-restart pattern search: each restart
starts from uniform random phase angles, sweeps the coordinates in
order, probes +/- the current step, walks greedily while a direction
keeps improving, and halves the step after a sweep without improvement.
Restarts are independent; the incumbent is the best value seen across
all of them.  The level-0 phase of every setting is pinned to zero
(global phases do not change probabilities), so a varied party
contributes d-1 parameters per setting.  Fixed blocks stay at the
reference construction: linear reference phases and equal state weights.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .expressions import FAMILIES, build_expression, evaluate
from .quantum import MeasurementPhases, QuantumSetup, born_rule_distribution

__all__ = [
    "OptimizationProblem",
    "OptimizationResult",
    "maximize",
    "objective",
    "write_trace_csv",
]

VERIFICATION_ATOL = 1e-9

INITIAL_STEP = 0.8
MIN_STEP = 1e-8


@dataclass(frozen=True)
class OptimizationProblem:
    """Search-space and budget configuration.

    ``budget`` caps the total number of objective evaluations; it is
    split evenly across the restarts.
    """

    dimension: int
    family: str = "Id"
    vary_alice_phases: bool = True
    vary_bob_phases: bool = True
    vary_state_weights: bool = False
    budget: int = 50_000
    restarts: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if not (self.vary_alice_phases or self.vary_bob_phases or self.vary_state_weights):
            raise ValueError("at least one parameter block must vary")

    @property
    def parameter_count(self) -> int:
        d = self.dimension
        n = 0
        if self.vary_alice_phases:
            n += 2 * (d - 1)
        if self.vary_bob_phases:
            n += 2 * (d - 1)
        if self.vary_state_weights:
            n += d
        return n


def _setup_from_parameters(problem: OptimizationProblem, params: np.ndarray) -> QuantumSetup:
    d = problem.dimension
    pos = 0

    def take(n: int) -> np.ndarray:
        nonlocal pos
        block = params[pos : pos + n]
        pos += n
        return block

    def phase_pair() -> tuple[np.ndarray, np.ndarray]:
        return tuple(
            np.concatenate([[0.0], take(d - 1)]) for _ in range(2)
        )

    alice_vectors = phase_pair() if problem.vary_alice_phases else None
    bob_vectors = phase_pair() if problem.vary_bob_phases else None
    if problem.vary_state_weights:
        raw = np.abs(take(d))
        norm = float(np.linalg.norm(raw))
        weights = raw / norm if norm > 1e-12 else np.full(d, 1.0 / math.sqrt(d))
    else:
        weights = np.full(d, 1.0 / math.sqrt(d))
    phases = MeasurementPhases(
        dimension=d, alice_vectors=alice_vectors, bob_vectors=bob_vectors
    )
    return QuantumSetup(dimension=d, state_weights=weights, phases=phases)


def objective(problem: OptimizationProblem, parameters) -> float:
    """Expression value of the setup encoded by a flat parameter vector.

    Layout: varied Alice phase vectors (levels 1..d-1 per setting), then
    varied Bob phase vectors, then raw state weights (absolute values,
    renormalised internally).
    """
    params = np.asarray(parameters, dtype=float)
    if params.shape != (problem.parameter_count,):
        raise ValueError(
            f"expected {problem.parameter_count} parameters, got shape {params.shape}"
        )
    expr = build_expression(problem.family, problem.dimension)
    return evaluate(expr, born_rule_distribution(_setup_from_parameters(problem, params)))


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """Best point found, with the monotone incumbent trace.

    ``trace`` holds (evaluation_index, incumbent_value) pairs recording
    every improvement; ``improved`` is False when nothing beat the very
    first sampled point.
    """

    best_value: float
    best_phases: MeasurementPhases
    best_state_weights: np.ndarray
    trace: tuple[tuple[int, float], ...]
    improved: bool


def _initial_point(problem: OptimizationProblem, rng: np.random.Generator) -> np.ndarray:
    d = problem.dimension
    settings = (2 if problem.vary_alice_phases else 0) + (2 if problem.vary_bob_phases else 0)
    parts = [rng.uniform(0.0, 2.0 * np.pi, size=settings * (d - 1))]
    if problem.vary_state_weights:
        parts.append(rng.uniform(0.1, 1.0, size=d))
    return np.concatenate(parts)


def maximize(problem: OptimizationProblem) -> OptimizationResult:
    """Run the seeded random-restart pattern search.

    Identical problems produce identical traces and results.  The final
    best value is re-verified from the result's own phases and weights
    through the plain Born-rule path; a disagreement beyond 1e-9 raises
    RuntimeError.
    """
    expr = build_expression(problem.family, problem.dimension)

    def value_of(params: np.ndarray) -> float:
        return evaluate(
            expr, born_rule_distribution(_setup_from_parameters(problem, params))
        )

    n = problem.parameter_count
    per_restart = max(1, problem.budget // problem.restarts)
    seeds = np.random.SeedSequence(problem.seed).spawn(problem.restarts)

    evaluations = 0
    trace: list[tuple[int, float]] = []
    best_value = -math.inf
    best_params: np.ndarray | None = None
    initial_value: float | None = None

    def record(candidate: float, params: np.ndarray) -> None:
        nonlocal best_value, best_params
        if candidate > best_value:
            best_value = candidate
            best_params = params.copy()
            trace.append((evaluations, candidate))

    for seed in seeds:
        rng = np.random.default_rng(seed)
        x = _initial_point(problem, rng)
        fx = value_of(x)
        evaluations += 1
        remaining = per_restart - 1
        if initial_value is None:
            initial_value = fx
        record(fx, x)

        step = INITIAL_STEP
        while remaining > 0 and step > MIN_STEP:
            moved = False
            for coord in range(n):
                if remaining <= 0:
                    break
                for sign in (1.0, -1.0):
                    if remaining <= 0:
                        break
                    trial = x.copy()
                    trial[coord] += sign * step
                    ft = value_of(trial)
                    evaluations += 1
                    remaining -= 1
                    if ft <= fx:
                        continue
                    x, fx = trial, ft
                    moved = True
                    record(fx, x)
                    while remaining > 0:  # keep walking while the direction pays
                        trial = x.copy()
                        trial[coord] += sign * step
                        ft = value_of(trial)
                        evaluations += 1
                        remaining -= 1
                        if ft <= fx:
                            break
                        x, fx = trial, ft
                        record(fx, x)
                    break
            if not moved:
                step *= 0.5

    assert best_params is not None and initial_value is not None
    setup = _setup_from_parameters(problem, best_params)
    verified = evaluate(
        build_expression(problem.family, problem.dimension),
        born_rule_distribution(setup),
    )
    if abs(verified - best_value) > VERIFICATION_ATOL:
        raise RuntimeError(
            f"re-verification mismatch: search reported {best_value}, "
            f"recomputation gives {verified}"
        )
    return OptimizationResult(
        best_value=verified,
        best_phases=setup.phases,
        best_state_weights=setup.state_weights,
        trace=tuple(trace),
        improved=best_value > initial_value,
    )


def write_trace_csv(result: OptimizationResult, path) -> None:
    """Write the incumbent trace as CSV with round-trippable floats."""
    target = Path(path)
    with target.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["evaluation_index", "incumbent_value"])
        for index, value in result.trace:
            writer.writerow([index, repr(value)])
