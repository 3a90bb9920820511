"""Reference quantum model: an entangled qudit pair measured in phased
Fourier bases.

The shared state has Schmidt weights w_j (equal weights 1/sqrt(d) by
default).  A measurement applies per-level phases exp(i * phase(j))
followed by a Fourier transform and a computational-basis readout, so
the joint amplitude for outcomes (k, l) is

    (1/d) * sum_j w_j exp(i [phi_a(j) + chi_b(j) + (2 pi / d) j (k - l)])

and depends on k - l only.  The reference phases are linear in j with
slopes (0, 1/2) for Alice and (1/4, -1/4) for Bob, in units of 2 pi / d.
For those the joint probabilities collapse to the closed form

    P(A_a = k, B_b = l) = 1 / (2 d^3 sin^2[pi (k - l + alpha_a + beta_b) / d])

whose difference-class correlators q_c = P(A1 = B1 + c) equal
1 / (2 d^2 sin^2[pi (c + 1/4) / d]) and obey the strict ordering
q_0 > q_{-1} > q_1 > q_{-2} > ...  The Id value, its noise threshold,
and the large-d limit 32 * G / pi^2 (G = Catalan's constant) all follow
from these correlators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .expressions import JointDistribution, correlator, shift_interval

__all__ = [
    "REFERENCE_ALICE_SLOPES",
    "REFERENCE_BOB_SLOPES",
    "MeasurementPhases",
    "NoiseModel",
    "QuantumSetup",
    "asymptotic_value",
    "born_rule_distribution",
    "catalan_constant",
    "closed_form_distribution",
    "mixed_distribution",
    "noise_threshold",
    "noisy_value",
    "ordered_shifts",
    "quantum_correlator",
    "quantum_value",
    "quantum_value_I",
    "symmetry_check",
]

REFERENCE_ALICE_SLOPES = (0.0, 0.5)
REFERENCE_BOB_SLOPES = (0.25, -0.25)

STATE_NORM_ATOL = 1e-12
SYMMETRY_ATOL = 1e-10


def _phase_vectors(vectors, d: int, name: str):
    if vectors is None:
        return None
    if len(vectors) != 2:
        raise ValueError(f"{name} needs one phase vector per setting, got {len(vectors)}")
    out = []
    for setting, vec in enumerate(vectors):
        arr = np.array(vec, dtype=float)
        if arr.shape != (d,):
            raise ValueError(
                f"{name}[{setting}] must have length {d}, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{name}[{setting}] must be finite")
        arr.setflags(write=False)
        out.append(arr)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class MeasurementPhases:
    """Per-setting measurement phases for both parties.

    Phases default to the linear form phase(j) = (2 pi / d) * slope * j.
    Explicit per-outcome vectors (radians, length d) override the linear
    form for the corresponding party.
    """

    dimension: int
    alice_slopes: tuple[float, float] = REFERENCE_ALICE_SLOPES
    bob_slopes: tuple[float, float] = REFERENCE_BOB_SLOPES
    alice_vectors: tuple[np.ndarray, np.ndarray] | None = None
    bob_vectors: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self) -> None:
        d = self.dimension
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        for name in ("alice_slopes", "bob_slopes"):
            slopes = getattr(self, name)
            if len(slopes) != 2:
                raise ValueError(f"{name} needs exactly two slopes, got {len(slopes)}")
        object.__setattr__(
            self, "alice_vectors", _phase_vectors(self.alice_vectors, d, "alice_vectors")
        )
        object.__setattr__(
            self, "bob_vectors", _phase_vectors(self.bob_vectors, d, "bob_vectors")
        )

    @classmethod
    def reference(cls, d: int) -> "MeasurementPhases":
        """The linear-phase construction behind the closed-form table."""
        return cls(dimension=d)

    def _vector(self, vectors, slopes, setting: int) -> np.ndarray:
        if setting not in (0, 1):
            raise ValueError(f"setting must be 0 or 1, got {setting}")
        if vectors is not None:
            return vectors[setting]
        d = self.dimension
        return (2.0 * math.pi / d) * slopes[setting] * np.arange(d)

    def alice_phase(self, setting: int) -> np.ndarray:
        return self._vector(self.alice_vectors, self.alice_slopes, setting)

    def bob_phase(self, setting: int) -> np.ndarray:
        return self._vector(self.bob_vectors, self.bob_slopes, setting)


@dataclass(frozen=True, eq=False)
class QuantumSetup:
    """Shared state (Schmidt weights) plus measurement phases."""

    dimension: int
    state_weights: np.ndarray
    phases: MeasurementPhases

    def __post_init__(self) -> None:
        d = self.dimension
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        weights = np.array(self.state_weights, dtype=complex)
        if weights.shape != (d,):
            raise ValueError(f"state_weights must have length {d}, got {weights.shape}")
        norm = float(np.sum(np.abs(weights) ** 2))
        if abs(norm - 1.0) > STATE_NORM_ATOL:
            raise ValueError(f"state weights have squared norm {norm}, expected 1")
        weights.setflags(write=False)
        object.__setattr__(self, "state_weights", weights)
        if self.phases.dimension != d:
            raise ValueError(
                f"phases built for d={self.phases.dimension}, setup has d={d}"
            )

    @classmethod
    def maximally_entangled(cls, d: int, phases: MeasurementPhases | None = None) -> "QuantumSetup":
        """Equal Schmidt weights 1/sqrt(d), reference phases by default."""
        return cls(
            dimension=d,
            state_weights=np.full(d, 1.0 / math.sqrt(d)),
            phases=phases if phases is not None else MeasurementPhases.reference(d),
        )


@dataclass(frozen=True)
class NoiseModel:
    """Isotropic admixture: weight p on the entangled state, 1-p on white noise."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise weight p must lie in [0, 1], got {self.p}")


def born_rule_distribution(setup: QuantumSetup) -> JointDistribution:
    """Joint outcome probabilities of a setup, from the Born rule.

    The outcome-pair amplitude depends on k - l only, so each setting
    pair is assembled from its d difference-class probabilities
    |sum_j w_j exp(i [phases(j) + 2 pi j m / d])|^2 / d^2 with
    m = (k - l) mod d.
    """
    d = setup.dimension
    levels = np.arange(d)
    fourier = np.exp(2j * np.pi * np.outer(levels, levels) / d)  # [j, m]
    class_index = (levels[:, None] - levels[None, :]) % d        # [k, l] -> m
    table = np.empty((2, 2, d, d))
    for a in (0, 1):
        alice = setup.phases.alice_phase(a)
        for b in (0, 1):
            bob = setup.phases.bob_phase(b)
            weighted = setup.state_weights * np.exp(1j * (alice + bob))
            amplitudes = weighted @ fourier / d
            class_prob = np.abs(amplitudes) ** 2
            table[a, b] = class_prob[class_index]
    return JointDistribution(dimension=d, table=table)


def closed_form_distribution(d: int) -> JointDistribution:
    """Joint probabilities of the reference setup, in closed form.

    Cell (a, b, k, l) holds 1 / (2 d^3 sin^2[pi (m + alpha_a + beta_b) / d])
    with m = (k - l) mod d and the reference slopes alpha, beta.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    levels = np.arange(d)
    class_index = (levels[:, None] - levels[None, :]) % d
    table = np.empty((2, 2, d, d))
    for a, alpha in enumerate(REFERENCE_ALICE_SLOPES):
        for b, beta in enumerate(REFERENCE_BOB_SLOPES):
            class_prob = 1.0 / (
                2.0 * d ** 3 * np.sin(np.pi * (levels + alpha + beta) / d) ** 2
            )
            table[a, b] = class_prob[class_index]
    return JointDistribution(dimension=d, table=table)


def _correlator_values(shifts: np.ndarray, d: int) -> np.ndarray:
    return 1.0 / (2.0 * d * d * np.sin(np.pi * (shifts + 0.25) / d) ** 2)


def quantum_correlator(c: int, d: int) -> float:
    """Reference-setup correlator q_c = P(A1 = B1 + c).

    Closed form 1 / (2 d^2 sin^2[pi (c + 1/4) / d]); the shift must lie
    in the canonical interval.
    """
    lo, hi = shift_interval(d)
    if not lo <= c <= hi:
        raise ValueError(
            f"shift {c} outside the canonical interval [{lo}, {hi}] for d={d}"
        )
    return 1.0 / (2.0 * d * d * math.sin(math.pi * (c + 0.25) / d) ** 2)


def ordered_shifts(d: int) -> tuple[int, ...]:
    """Canonical shifts in strictly decreasing order of `quantum_correlator`."""
    lo, hi = shift_interval(d)
    out = [0]
    m = 1
    while len(out) < d:
        if -m >= lo:
            out.append(-m)
        if m <= hi and len(out) < d:
            out.append(m)
        m += 1
    return tuple(out)


def symmetry_check(dist: JointDistribution, atol: float = SYMMETRY_ATOL) -> bool:
    """True when the four correlator chains coincide at every shift.

    Checks P(A1 = B1 + c) = P(B1 = A2 + c + 1) = P(A2 = B2 + c)
    = P(B2 = A1 + c) for every canonical shift c.
    """
    lo, hi = shift_interval(dist.dimension)
    for c in range(lo, hi + 1):
        reference = correlator(dist, 0, 0, c)
        others = (
            correlator(dist, 1, 0, -(c + 1)),  # P(B1 = A2 + c + 1)
            correlator(dist, 1, 1, c),
            correlator(dist, 0, 1, -c),        # P(B2 = A1 + c)
        )
        if any(abs(v - reference) > atol for v in others):
            return False
    return True


def quantum_value(d: int) -> float:
    """Id-family value of the reference setup, from the correlator form.

    Equals 4 * sum_k (1 - 2k/(d-1)) * (q_k - q_{-(k+1)}) over
    k = 0 .. floor(d/2)-1, which the tests pin against the direct
    tensor-contraction route.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    k = np.arange(d // 2)
    weights = (d - 1 - 2 * k) / (d - 1)
    gaps = _correlator_values(k, d) - _correlator_values(-(k + 1), d)
    return float(4.0 * np.sum(weights * gaps))


def quantum_value_I(d: int) -> float:
    """I-family value of the reference setup: 4 * q_0, always above 3."""
    value = 4.0 * quantum_correlator(0, d)
    assert value > 3.0, f"reference I value {value} at d={d} fell to 3 or below"
    return value


@lru_cache(maxsize=None)
def catalan_constant(tol: float = 1e-14) -> float:
    """Catalan's constant G from its alternating series sum (-1)^k/(2k+1)^2.

    Consecutive terms are paired into the positive summand
    1/(4k+1)^2 - 1/(4k+3)^2 = O(k^-3); the truncation point comes from
    the integral tail bound and chunk partial sums are combined with
    Kahan compensation, so the result is accurate to ``tol``.
    """
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    pairs = max(64, math.ceil(math.sqrt(1.0 / (8.0 * tol))))
    total = 0.0
    compensation = 0.0
    chunk = 1 << 18
    for start in range(0, pairs, chunk):
        k = np.arange(start, min(start + chunk, pairs), dtype=float)
        terms = 1.0 / (4.0 * k + 1.0) ** 2 - 1.0 / (4.0 * k + 3.0) ** 2
        y = float(terms.sum()) - compensation
        t = total + y
        compensation = (t - total) - y
        total = t
    return total


def asymptotic_value() -> float:
    """Large-d limit of `quantum_value`: 32 * G / pi^2 with G Catalan's constant."""
    return 32.0 * catalan_constant() / math.pi ** 2


def mixed_distribution(d: int, p: float) -> JointDistribution:
    """Closed-form table mixed with white noise: p * quantum + (1-p) uniform."""
    noise = NoiseModel(p)  # validates the range
    table = noise.p * closed_form_distribution(d).table + (1.0 - noise.p) / (d * d)
    return JointDistribution(dimension=d, table=table)


def noisy_value(d: int, noise: NoiseModel) -> float:
    """Id-family value under isotropic noise: p * quantum_value(d).

    The uniform component cancels against the Id tensor, so the value is
    linear in p; the tests pin this against evaluating the mixed table.
    """
    return noise.p * quantum_value(d)


def noise_threshold(d: int) -> float:
    """Smallest entangled weight p that still violates the local bound 2."""
    return 2.0 / quantum_value(d)
