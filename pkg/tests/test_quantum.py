"""Reference measurement setup: Born rule, closed form, asymptotics, noise."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qudit_bell import (
    MeasurementPhases,
    NoiseModel,
    QuantumSetup,
    asymptotic_value,
    born_rule_distribution,
    build_expression,
    catalan_constant,
    closed_form_distribution,
    correlator,
    evaluate,
    mixed_distribution,
    noise_threshold,
    noisy_value,
    ordered_shifts,
    point_mass_distribution,
    quantum_correlator,
    quantum_value,
    quantum_value_I,
    shift_interval,
    symmetry_check,
)
from qudit_bell.local_models import DeterministicStrategy

dims = st.integers(min_value=2, max_value=12)


# ---------------------------------------------------------------- phases


def test_reference_phases_slopes():
    phases = MeasurementPhases.reference(4)
    assert phases.alice_slopes == (0.0, 0.5)
    assert phases.bob_slopes == (0.25, -0.25)
    np.testing.assert_allclose(
        phases.alice_phase(1), (2 * math.pi / 4) * 0.5 * np.arange(4), atol=0
    )
    np.testing.assert_allclose(
        phases.bob_phase(0), (2 * math.pi / 4) * 0.25 * np.arange(4), atol=0
    )


def test_explicit_phase_vectors_override_slopes():
    vec = (np.arange(3.0), np.zeros(3))
    phases = MeasurementPhases(3, (0.0, 0.5), (0.25, -0.25), alice_vectors=vec)
    np.testing.assert_array_equal(phases.alice_phase(0), np.arange(3.0))
    np.testing.assert_array_equal(phases.alice_phase(1), np.zeros(3))
    # bob still follows its slopes
    np.testing.assert_allclose(
        phases.bob_phase(1), (2 * math.pi / 3) * -0.25 * np.arange(3), atol=0
    )


def test_phase_vector_validation():
    with pytest.raises(ValueError):
        MeasurementPhases(3, (0.0, 0.5), (0.25, -0.25), alice_vectors=(np.zeros(2), np.zeros(3)))
    with pytest.raises(ValueError):
        MeasurementPhases(
            3, (0.0, 0.5), (0.25, -0.25), bob_vectors=(np.full(3, np.nan), np.zeros(3))
        )


def test_setup_validation():
    with pytest.raises(ValueError):
        QuantumSetup(3, np.array([1.0, 1.0, 1.0]), MeasurementPhases.reference(3))
    with pytest.raises(ValueError):
        QuantumSetup(
            3, np.full(3, 1 / math.sqrt(3)), MeasurementPhases.reference(4)
        )
    setup = QuantumSetup.maximally_entangled(5)
    np.testing.assert_allclose(np.abs(setup.state_weights), 1 / math.sqrt(5), atol=1e-15)


# ---------------------------------------------------------------- Born rule


def test_born_matches_closed_form():
    for d in range(2, 17):
        born = born_rule_distribution(QuantumSetup.maximally_entangled(d))
        closed = closed_form_distribution(d)
        np.testing.assert_allclose(born.table, closed.table, atol=1e-12)


def test_zero_phases_give_perfect_correlation_d2():
    phases = MeasurementPhases(2, (0.0, 0.0), (0.0, 0.0))
    dist = born_rule_distribution(QuantumSetup.maximally_entangled(2, phases=phases))
    for a in (0, 1):
        for b in (0, 1):
            assert dist.table[a, b, 0, 0] == pytest.approx(0.5, abs=1e-12)
            assert dist.table[a, b, 1, 1] == pytest.approx(0.5, abs=1e-12)
            assert dist.table[a, b, 0, 1] == pytest.approx(0.0, abs=1e-12)


def test_reference_entry_values():
    # diagonal entry at d=2 is (2+sqrt(2))/8
    dist2 = born_rule_distribution(QuantumSetup.maximally_entangled(2))
    assert dist2.table[0, 0, 0, 0] == pytest.approx((2 + math.sqrt(2)) / 8, abs=1e-12)
    # d=3: same-outcome entry 2(2+sqrt(3))/27, next-shift entry 1/27
    dist3 = closed_form_distribution(3)
    assert dist3.table[0, 0, 0, 0] == pytest.approx(2 * (2 + math.sqrt(3)) / 27, abs=1e-12)
    assert dist3.table[0, 0, 0, 0] == pytest.approx(0.27645, abs=5e-5)
    assert dist3.table[0, 0, 0, 1] == pytest.approx(1 / 27, abs=1e-12)
    assert dist3.table[0, 0, 0, 1] == pytest.approx(0.03704, abs=5e-5)


def test_closed_form_translation_invariance():
    for d in (2, 3, 5, 8):
        table = closed_form_distribution(d).table
        for m in range(d):
            entries = [table[1, 0, k, (k - m) % d] for k in range(d)]
            assert max(entries) - min(entries) == 0.0


# ---------------------------------------------------------------- correlators


def test_quantum_correlator_known_values():
    assert quantum_correlator(0, 3) == pytest.approx(2 * (2 + math.sqrt(3)) / 9, abs=1e-13)
    assert quantum_correlator(-1, 3) == pytest.approx(1 / 9, abs=1e-13)
    assert quantum_correlator(0, 2) == pytest.approx((2 + math.sqrt(2)) / 4, abs=1e-13)


def test_quantum_correlator_domain():
    with pytest.raises(ValueError):
        quantum_correlator(2, 3)
    with pytest.raises(ValueError):
        quantum_correlator(-2, 3)


@given(dims)
def test_quantum_correlators_partition_unity(d):
    lo, hi = shift_interval(d)
    assert sum(quantum_correlator(c, d) for c in range(lo, hi + 1)) == pytest.approx(
        1.0, abs=1e-12
    )


@given(dims)
def test_correlator_of_closed_form_matches_quantum_correlator(d):
    dist = closed_form_distribution(d)
    lo, hi = shift_interval(d)
    for c in (lo, 0, hi):
        assert correlator(dist, 0, 0, c) == pytest.approx(quantum_correlator(c, d), abs=1e-12)


def test_symmetry_chains_hold_for_reference_distribution():
    for d in range(2, 13):
        assert symmetry_check(closed_form_distribution(d))


def test_symmetry_check_rejects_asymmetric_distribution():
    dist = point_mass_distribution(DeterministicStrategy(0, 0, 0, 1), 3)
    assert not symmetry_check(dist)


def test_ordered_shifts_sequence():
    assert ordered_shifts(2) == (0, -1)
    assert ordered_shifts(3) == (0, -1, 1)
    assert ordered_shifts(4) == (0, -1, 1, -2)
    assert ordered_shifts(5) == (0, -1, 1, -2, 2)


@given(st.integers(min_value=2, max_value=40))
def test_correlator_ordering_strictly_decreasing(d):
    values = [quantum_correlator(c, d) for c in ordered_shifts(d)]
    assert all(a > b for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------- values


def test_quantum_value_symbolic_anchors():
    assert quantum_value(2) == pytest.approx(2 * math.sqrt(2), abs=1e-10)
    assert quantum_value(3) == pytest.approx(4 / (6 * math.sqrt(3) - 9), abs=1e-10)
    assert quantum_value(4) == pytest.approx(
        (2 / 3) * (math.sqrt(2) + math.sqrt(10 - math.sqrt(2))), abs=1e-10
    )
    assert quantum_value(3) == pytest.approx(2.87293, abs=5e-5)
    assert quantum_value(4) == pytest.approx(2.89624, abs=5e-5)


def test_quantum_value_matches_direct_evaluation():
    for d in range(2, 13):
        direct = evaluate(build_expression("Id", d), closed_form_distribution(d))
        assert quantum_value(d) == pytest.approx(direct, abs=1e-12)


def test_quantum_value_monotone_increasing():
    values = [quantum_value(d) for d in range(2, 102)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_I_expression_quantum_value():
    assert quantum_value_I(2) == pytest.approx(2 + math.sqrt(2), abs=1e-12)
    assert quantum_value_I(3) == pytest.approx(8 * (2 + math.sqrt(3)) / 9, abs=1e-12)
    for d in (2, 10, 100):
        assert quantum_value_I(d) > 3.0


# ---------------------------------------------------------------- asymptotics


def test_catalan_constant_against_mpmath():
    mpmath.mp.dps = 30
    assert abs(catalan_constant() - float(mpmath.catalan)) < 1e-14


def test_asymptotic_value_against_mpmath():
    mpmath.mp.dps = 30
    reference = float(32 * mpmath.catalan / mpmath.pi**2)
    assert abs(asymptotic_value() - reference) < 1e-13
    assert asymptotic_value() == pytest.approx(2.96981, abs=5e-5)


def test_large_dimension_approaches_limit():
    assert abs(quantum_value(10_000) - asymptotic_value()) < 1e-3


# ---------------------------------------------------------------- noise


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(-0.1)
    with pytest.raises(ValueError):
        NoiseModel(1.1)
    NoiseModel(0.0)
    NoiseModel(1.0)


@settings(max_examples=40)
@given(dims, st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
def test_mixed_distribution_structure(d, p):
    mixed = mixed_distribution(d, p)
    expected = p * closed_form_distribution(d).table + (1 - p) / d**2
    np.testing.assert_allclose(mixed.table, expected, atol=1e-15)


@settings(max_examples=40)
@given(dims, st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
def test_noisy_value_matches_mixed_evaluation(d, p):
    # uniform noise evaluates to zero, so the value scales linearly in p
    via_eval = evaluate(build_expression("Id", d), mixed_distribution(d, p))
    assert noisy_value(d, NoiseModel(p)) == pytest.approx(via_eval, abs=1e-12)


def test_noise_threshold_values():
    assert noise_threshold(2) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert noise_threshold(3) == pytest.approx((6 * math.sqrt(3) - 9) / 2, abs=1e-12)
    assert noise_threshold(3) == pytest.approx(0.69615, abs=5e-5)
    assert noise_threshold(4) == pytest.approx(0.69055, abs=5e-5)


def test_noise_threshold_is_critical_point():
    for d in (2, 3, 7, 20):
        p = noise_threshold(d)
        assert noisy_value(d, NoiseModel(p)) == pytest.approx(2.0, abs=1e-12)
        assert noisy_value(d, NoiseModel(min(1.0, p + 1e-6))) > 2.0
        assert noisy_value(d, NoiseModel(p - 1e-6)) < 2.0


def test_noise_threshold_monotone_decreasing():
    thresholds = [noise_threshold(d) for d in range(2, 102)]
    assert all(b < a for a, b in zip(thresholds, thresholds[1:]))
    assert thresholds[-1] > 2 / asymptotic_value()  # stays above the limit


def test_threshold_limit_decimal():
    assert 2 / asymptotic_value() == pytest.approx(0.67344, abs=5e-5)
