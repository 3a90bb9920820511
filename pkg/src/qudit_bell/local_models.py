"""Local hidden-variable models and the local bounds they imply.

A deterministic strategy fixes one outcome for each of the four
measurements; a general local model is a probability mixture of the d^4
strategies.  Bell expressions are linear, so their maximum over local
models is attained at a deterministic strategy and the local bound can
be found by enumeration.

For the Id family a second, independent route exists: a strategy only
enters through the canonical shifts realised around the measurement
cycle, the four shifts obey one cyclic constraint, and the value is the
sum of the four shift weights.  `local_bound_cases` enumerates the d^3
admissible shift tuples with exact integer arithmetic; the tests
cross-check it against the brute-force route.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .expressions import (
    BellExpression,
    JointDistribution,
    canonical_shift,
    shift_interval,
    term_weight,
)

__all__ = [
    "ENUMERATION_CAP",
    "DeterministicStrategy",
    "EnumerationCapError",
    "LocalModel",
    "StrategyDifferences",
    "differences_of",
    "local_bound_bruteforce",
    "local_bound_cases",
    "model_value",
    "point_mass_distribution",
    "strategy_value",
]

ENUMERATION_CAP = 10_000_000

WEIGHT_ATOL = 1e-12


class EnumerationCapError(RuntimeError):
    """Raised when a brute-force enumeration would exceed the strategy cap."""


@dataclass(frozen=True, order=True)
class DeterministicStrategy:
    """One local assignment of outcomes to A1, A2, B1, B2."""

    a1: int
    a2: int
    b1: int
    b2: int


def _check_strategy(strategy: DeterministicStrategy, d: int) -> None:
    for name in ("a1", "a2", "b1", "b2"):
        value = getattr(strategy, name)
        if not 0 <= value < d:
            raise ValueError(f"outcome {name}={value} outside 0..{d - 1}")


class StrategyDifferences(NamedTuple):
    """Canonical outcome shifts around the measurement cycle.

    The four links are A1 = B1 + a1_b1, B1 = A2 + b1_a2 + 1,
    A2 = B2 + a2_b2 and B2 = A1 + b2_a1, each shift reduced to the
    canonical interval.  The extra +1 on the B1/A2 link makes the four
    shifts obey a1_b1 + b1_a2 + a2_b2 + b2_a1 + 1 = 0 (mod d).
    """

    a1_b1: int
    b1_a2: int
    a2_b2: int
    b2_a1: int


def differences_of(strategy: DeterministicStrategy, d: int) -> StrategyDifferences:
    """Canonical shift tuple realised by a deterministic strategy."""
    _check_strategy(strategy, d)
    return StrategyDifferences(
        canonical_shift(strategy.a1 - strategy.b1, d),
        canonical_shift(strategy.b1 - strategy.a2 - 1, d),
        canonical_shift(strategy.a2 - strategy.b2, d),
        canonical_shift(strategy.b2 - strategy.a1, d),
    )


def point_mass_distribution(strategy: DeterministicStrategy, d: int) -> JointDistribution:
    """The joint distribution produced by a single deterministic strategy."""
    _check_strategy(strategy, d)
    table = np.zeros((2, 2, d, d))
    table[0, 0, strategy.a1, strategy.b1] = 1.0
    table[0, 1, strategy.a1, strategy.b2] = 1.0
    table[1, 0, strategy.a2, strategy.b1] = 1.0
    table[1, 1, strategy.a2, strategy.b2] = 1.0
    return JointDistribution(dimension=d, table=table)


def strategy_value(expr: BellExpression, strategy: DeterministicStrategy) -> float:
    """Id-family value of one strategy via the shift-weight sum.

    Equals ``evaluate(expr, point_mass_distribution(strategy, d))`` but
    goes through the canonical shift tuple instead of the coefficient
    tensor; only the Id construction admits this shortcut.
    """
    if expr.family != "Id":
        raise ValueError(
            "strategy_value applies to the Id family; evaluate the point-mass "
            "distribution for other families"
        )
    diffs = differences_of(strategy, expr.dimension)
    return sum(term_weight(x, expr.dimension) for x in diffs)


def local_bound_bruteforce(
    expr: BellExpression,
    *,
    cap: int = ENUMERATION_CAP,
    tie_atol: float = 1e-9,
) -> tuple[float, list[DeterministicStrategy]]:
    """Maximum of a Bell expression over all d^4 deterministic strategies.

    Returns ``(max_value, maximizers)`` with the maximizers listed in
    lexicographic (a1, a2, b1, b2) order; strategies within ``tie_atol``
    of the maximum count as maximizers.  Raises `EnumerationCapError`
    when d^4 exceeds ``cap``; use `local_bound_cases` for large d.

    All built-in families have coefficients that are integer multiples
    of 1/(d-1), so per-strategy sums are carried as scaled integers and
    the maximum is exact (a single float division at the end).  Tensors
    without that structure fall back to float sums, where ``tie_atol``
    also absorbs roundoff in the tie test.
    """
    d = expr.dimension
    total = d ** 4
    if total > cap:
        raise EnumerationCapError(
            f"enumerating {d}^4 = {total} strategies exceeds the cap {cap}; "
            "use local_bound_cases for large dimensions"
        )
    t = expr.coefficients
    scale = max(d - 1, 1)
    scaled = t * scale
    rounded = np.rint(scaled)
    if np.max(np.abs(scaled - rounded)) <= 1e-6:
        t = rounded.astype(np.int64)
    else:
        scale = None
    values = (
        t[0, 0][:, None, :, None]      # (a1, b1)
        + t[0, 1][:, None, None, :]    # (a1, b2)
        + t[1, 0][None, :, :, None]    # (a2, b1)
        + t[1, 1][None, :, None, :]    # (a2, b2)
    )
    if scale is not None:
        best = int(values.max()) / scale
        winners = np.argwhere(values == values.max())
    else:
        best = float(values.max())
        winners = np.argwhere(values >= best - tie_atol)
    maximizers = [
        DeterministicStrategy(int(a1), int(a2), int(b1), int(b2))
        for a1, a2, b1, b2 in winners
    ]
    return best, maximizers


def local_bound_cases(d: int) -> tuple[float, set[float]]:
    """Local bound of the Id family via the shift-tuple enumeration.

    Enumerates every canonical shift tuple compatible with the cyclic
    constraint (three shifts free, the fourth determined mod d) and
    maximises the shift-weight sum.  Weight sums are rationals with
    denominator d-1 and are handled as integer numerators, so the
    returned maximum and attainable-value set are exact.
    """
    lo, hi = shift_interval(d)
    shifts = np.arange(lo, hi + 1)
    # term_weight(x, d) * (d - 1), as exact integers
    numerators = np.where(shifts >= 0, d - 1 - 2 * shifts, -2 * shifts - (d + 1))

    def num_of(x: np.ndarray) -> np.ndarray:
        return numerators[x - lo]

    r = shifts[:, None, None]
    s = shifts[None, :, None]
    t = shifts[None, None, :]
    half = d // 2
    u = (-1 - r - s - t + half) % d - half
    totals = num_of(r) + num_of(s) + num_of(t) + num_of(u)
    unique = np.unique(totals)
    attainable = {int(n) / (d - 1) for n in unique}
    return int(unique[-1]) / (d - 1), attainable


@dataclass(frozen=True, eq=False)
class LocalModel:
    """Probability mixture of deterministic strategies."""

    dimension: int
    weights: Mapping[DeterministicStrategy, float]

    def __post_init__(self) -> None:
        d = self.dimension
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        weights = dict(self.weights)
        if not weights:
            raise ValueError("a local model needs at least one strategy")
        total = 0.0
        for strategy, w in weights.items():
            _check_strategy(strategy, d)
            if w < -WEIGHT_ATOL:
                raise ValueError(f"negative strategy weight {w} for {strategy}")
            total += w
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"strategy weights sum to {total}, expected 1")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, d: int) -> "LocalModel":
        """Equal weight on every deterministic strategy."""
        w = 1.0 / d ** 4
        weights = {
            DeterministicStrategy(a1, a2, b1, b2): w
            for a1 in range(d)
            for a2 in range(d)
            for b1 in range(d)
            for b2 in range(d)
        }
        return cls(dimension=d, weights=weights)

    def to_distribution(self) -> JointDistribution:
        """The joint distribution induced by the mixture."""
        d = self.dimension
        table = np.zeros((2, 2, d, d))
        for s, w in self.weights.items():
            table[0, 0, s.a1, s.b1] += w
            table[0, 1, s.a1, s.b2] += w
            table[1, 0, s.a2, s.b1] += w
            table[1, 1, s.a2, s.b2] += w
        return JointDistribution(dimension=d, table=table)


def model_value(expr: BellExpression, model: LocalModel) -> float:
    """Expression value of a local model (mixture of strategy values)."""
    if expr.dimension != model.dimension:
        raise ValueError(
            f"dimension mismatch: expression d={expr.dimension}, model d={model.dimension}"
        )
    t = expr.coefficients
    total = 0.0
    for s, w in model.weights.items():
        total += w * (
            t[0, 0, s.a1, s.b1]
            + t[0, 1, s.a1, s.b2]
            + t[1, 0, s.a2, s.b1]
            + t[1, 1, s.a2, s.b2]
        )
    return float(total)
