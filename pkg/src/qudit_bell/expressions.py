"""Bell expressions over joint outcome probabilities.

Scenario: two parties, two measurement settings each, d outcomes per
measurement.  Alice's settings are written A1, A2 and Bob's B1, B2, with
outcomes 0..d-1.  A Bell expression is a linear functional of the joint
outcome probabilities, stored as a dense coefficient tensor indexed
``(alice_setting, bob_setting, alice_outcome, bob_outcome)`` with
0-based settings.

Three families are provided:

``I``
    Four unit-weight coincidence terms, one per setting pair.  Local
    hidden-variable models satisfy I <= 3; the algebraic maximum is 4.
``I3``
    The signed eight-term variant: the four coincidence terms minus four
    terms at the adjacent outcome shift.  Local bound 2.
``Id``
    The graded family for any d >= 2: shift-k coincidences enter with
    weight 1 - 2k/(d-1) and the penalised shifts with the opposite sign,
    for k = 0 .. floor(d/2)-1.  Local bound 2, algebraic maximum 4;
    coincides with I3 at d = 3 and equals 2*I - 4 at d = 2.

All functions are pure; the dataclasses are immutable after construction
and safe to share between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DISTRIBUTION_ATOL",
    "FAMILIES",
    "SCHEMA_VERSION",
    "BellExpression",
    "JointDistribution",
    "build_expression",
    "canonical_shift",
    "correlator",
    "evaluate",
    "evaluate_via_correlators",
    "shift_interval",
    "term_weight",
]

FAMILIES = ("I", "I3", "Id")

SCHEMA_VERSION = 1

# Probability tables produced by transcendental closed forms cannot be
# normalised exactly; all validity checks use this absolute tolerance.
DISTRIBUTION_ATOL = 1e-9


def shift_interval(d: int) -> tuple[int, int]:
    """Inclusive canonical range for outcome differences modulo d."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return -(d // 2), (d - 1) // 2


def canonical_shift(x: int, d: int) -> int:
    """Reduce x modulo d into the canonical interval of `shift_interval`."""
    half = d // 2
    return (int(x) + half) % d - half


def term_weight(x: int, d: int) -> float:
    """Weight carried by a coincidence term at canonical outcome shift x.

    Nonnegative shifts k enter with weight 1 - 2k/(d-1); a negative
    shift x carries the matching penalty -(1 - 2(-x-1)/(d-1)).  The
    shift must lie in the canonical interval for dimension d.
    """
    lo, hi = shift_interval(d)
    if not lo <= x <= hi:
        raise ValueError(
            f"shift {x} outside the canonical interval [{lo}, {hi}] for d={d}"
        )
    numerator = d - 1 - 2 * x if x >= 0 else -2 * x - (d + 1)
    return numerator / (d - 1)


def _readonly_array(values, shape: tuple[int, ...], name: str, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint outcome probabilities for the four setting pairs.

    ``table`` has shape (2, 2, d, d) indexed by (alice_setting,
    bob_setting, alice_outcome, bob_outcome); each setting pair holds a
    normalised probability table.
    """

    dimension: int
    table: np.ndarray

    def __post_init__(self) -> None:
        d = self.dimension
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        table = _readonly_array(self.table, (2, 2, d, d), "table")
        if float(table.min()) < -DISTRIBUTION_ATOL:
            raise ValueError(f"negative probability entry {table.min()}")
        pair_sums = table.sum(axis=(2, 3))
        worst = float(np.max(np.abs(pair_sums - 1.0)))
        if worst > DISTRIBUTION_ATOL:
            raise ValueError(f"setting-pair totals deviate from 1 by {worst}")
        object.__setattr__(self, "table", table)

    @classmethod
    def uniform(cls, d: int) -> "JointDistribution":
        """The fully random distribution: every cell 1/d^2."""
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        return cls(dimension=d, table=np.full((2, 2, d, d), 1.0 / (d * d)))

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "joint_distribution",
            "dimension": self.dimension,
            "table": self.table.tolist(),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "JointDistribution":
        if payload.get("kind") != "joint_distribution":
            raise ValueError(f"not a joint_distribution payload: {payload.get('kind')!r}")
        return cls(dimension=int(payload["dimension"]), table=payload["table"])

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "JointDistribution":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class BellExpression:
    """A Bell expression as a dense coefficient tensor.

    The value on a distribution is the full contraction of
    ``coefficients`` (shape (2, 2, d, d), indexed like
    ``JointDistribution.table``) against the probability table.
    """

    dimension: int
    family: str
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        d = self.dimension
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        coeff = _readonly_array(self.coefficients, (2, 2, d, d), "coefficients")
        object.__setattr__(self, "coefficients", coeff)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "bell_expression",
            "dimension": self.dimension,
            "family": self.family,
            "coefficients": self.coefficients.tolist(),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "BellExpression":
        if payload.get("kind") != "bell_expression":
            raise ValueError(f"not a bell_expression payload: {payload.get('kind')!r}")
        return cls(
            dimension=int(payload["dimension"]),
            family=str(payload["family"]),
            coefficients=payload["coefficients"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "BellExpression":
        return cls.from_json_dict(json.loads(text))


def build_expression(family: str, d: int) -> BellExpression:
    """Construct the coefficient tensor for one expression family.

    Each coincidence term P(X = Y + shift) expands into the d joint
    outcome cells whose difference class matches the shift; coefficients
    of coinciding cells add.  Weights are formed as single divisions by
    d-1 so equal-magnitude entries are bitwise equal.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")

    coeff = np.zeros((2, 2, d, d))
    outcomes = np.arange(d)

    def alice_leads(a: int, b: int, shift: int, weight: float) -> None:
        # P(A_{a+1} = B_{b+1} + shift): Bob's outcome trails by `shift`.
        coeff[a, b, outcomes, (outcomes - shift) % d] += weight

    def bob_leads(a: int, b: int, shift: int, weight: float) -> None:
        # P(B_{b+1} = A_{a+1} + shift): Alice's outcome trails by `shift`.
        coeff[a, b, outcomes, (outcomes + shift) % d] += weight

    if family == "I":
        alice_leads(0, 0, 0, 1.0)
        bob_leads(1, 0, 1, 1.0)
        alice_leads(1, 1, 0, 1.0)
        bob_leads(0, 1, 0, 1.0)
    else:
        brackets = 1 if family == "I3" else d // 2
        for k in range(brackets):
            w = (d - 1 - 2 * k) / (d - 1)
            alice_leads(0, 0, k, w)
            bob_leads(1, 0, k + 1, w)
            alice_leads(1, 1, k, w)
            bob_leads(0, 1, k, w)
            alice_leads(0, 0, -k - 1, -w)
            bob_leads(1, 0, -k, -w)
            alice_leads(1, 1, -k - 1, -w)
            bob_leads(0, 1, -k - 1, -w)
    return BellExpression(dimension=d, family=family, coefficients=coeff)


def _check_setting(value: int, name: str) -> None:
    if value not in (0, 1):
        raise ValueError(f"{name} must be 0 or 1, got {value}")


def correlator(dist: JointDistribution, alice_setting: int, bob_setting: int, shift: int) -> float:
    """Probability that the chosen outcomes differ by ``shift`` mod d.

    Returns P(A = B + shift) for the given 0-based settings; ``shift``
    is interpreted modulo d.  The d correlators of a setting pair
    partition the outcome grid, so they sum to 1.
    """
    _check_setting(alice_setting, "alice_setting")
    _check_setting(bob_setting, "bob_setting")
    d = dist.dimension
    rows = np.arange(d)
    return float(dist.table[alice_setting, bob_setting, rows, (rows - shift) % d].sum())


def evaluate(expr: BellExpression, dist: JointDistribution) -> float:
    """Value of a Bell expression on a joint distribution."""
    if expr.dimension != dist.dimension:
        raise ValueError(
            f"dimension mismatch: expression d={expr.dimension}, distribution d={dist.dimension}"
        )
    return float(np.sum(expr.coefficients * dist.table))


def evaluate_via_correlators(expr: BellExpression, dist: JointDistribution) -> float:
    """Evaluate through the correlators of each setting pair.

    Independent cross-check of `evaluate`: reconstructs the family value
    from difference-class probabilities instead of contracting the
    coefficient tensor.
    """
    if expr.dimension != dist.dimension:
        raise ValueError(
            f"dimension mismatch: expression d={expr.dimension}, distribution d={dist.dimension}"
        )

    def alice_leads(a: int, b: int, shift: int) -> float:
        return correlator(dist, a, b, shift)

    def bob_leads(a: int, b: int, shift: int) -> float:
        return correlator(dist, a, b, -shift)

    if expr.family == "I":
        return (
            alice_leads(0, 0, 0)
            + bob_leads(1, 0, 1)
            + alice_leads(1, 1, 0)
            + bob_leads(0, 1, 0)
        )

    d = expr.dimension
    brackets = 1 if expr.family == "I3" else d // 2
    total = 0.0
    for k in range(brackets):
        w = (d - 1 - 2 * k) / (d - 1)
        plus = (
            alice_leads(0, 0, k)
            + bob_leads(1, 0, k + 1)
            + alice_leads(1, 1, k)
            + bob_leads(0, 1, k)
        )
        minus = (
            alice_leads(0, 0, -k - 1)
            + bob_leads(1, 0, -k)
            + alice_leads(1, 1, -k - 1)
            + bob_leads(0, 1, -k - 1)
        )
        total += w * (plus - minus)
    return total
