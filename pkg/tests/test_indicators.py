import math

import numpy as np
import pytest

from partsep.indicators import (
    DEFAULT_ENTROPY,
    EntropySpec,
    IndicatorSpec,
    f_K,
    f_alpha,
    f_label,
    geometric_mean_average_inequality_check,
    label_objective,
    m_alpha,
    m_label,
    reduction,
)
from partsep.labels import enumerate_proper_labels
from partsep.partitions import Partition, all_partitions, top
from partsep.states import StateVector, random_state

R2 = 1.0 / math.sqrt(2.0)


def bisep_23() -> StateVector:
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[3] = R2  # |0>_1 (|00>+|11>)_23
    return StateVector((2, 2, 2), amps)


def ghz() -> StateVector:
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[7] = R2
    return StateVector((2, 2, 2), amps)


def test_entropy_spec_validation():
    with pytest.raises(ValueError):
        EntropySpec("shannon")
    with pytest.raises(ValueError):
        EntropySpec("tsallis")  # missing order
    with pytest.raises(ValueError):
        EntropySpec("renyi", -1.0)
    with pytest.raises(ValueError):
        EntropySpec("vonNeumann", 2.0)  # spurious order
    assert EntropySpec("renyi", 0.5).is_concave
    assert not EntropySpec("renyi", 2.0).is_concave
    assert EntropySpec("tsallis", 3.0).is_concave


@pytest.mark.parametrize("spec", [
    EntropySpec("vonNeumann"),
    EntropySpec("tsallis", 2.0),
    EntropySpec("tsallis", 0.7),
    EntropySpec("renyi", 0.5),
    EntropySpec("renyi", 2.0),
    EntropySpec("concurrenceSq"),
])
def test_matrix_derivative_matches_finite_differences(spec):
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    deriv = spec.matrix_derivative(rho)
    eps = 1e-6
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = (h + h.conj().T) / 2
    fd = (spec.of(rho + eps * h) - spec.of(rho - eps * h)) / (2 * eps)
    assert fd == pytest.approx(np.trace(deriv @ h).real, abs=1e-5)


def test_f_K_zero_iff_factor():
    psi = bisep_23()
    assert f_K(psi, (1,)) == pytest.approx(0.0, abs=1e-12)
    assert f_K(psi, (2, 3)) == pytest.approx(0.0, abs=1e-12)
    assert f_K(psi, (2,)) == pytest.approx(0.5, abs=1e-12)  # Tsallis-2 of I/2
    g = ghz()
    for k in ((1,), (2,), (3,), (1, 2)):
        assert f_K(g, k) > 0.4


def test_f_K_subset_validation():
    psi = ghz()
    for bad in ((), (0,), (4,), (1, 1), (1, 2, 3)):
        with pytest.raises(ValueError):
            f_K(psi, bad)


def test_f_alpha_trivial_partition_is_zero():
    assert f_alpha(ghz(), top(3)) == 0.0


def test_f_alpha_vanishes_exactly_on_separating_partitions():
    psi = bisep_23()
    assert f_alpha(psi, Partition.parse("1|23", 3)) == pytest.approx(0.0, abs=1e-12)
    assert f_alpha(psi, Partition.parse("12|3", 3)) > 0.1
    assert f_alpha(psi, Partition.parse("1|2|3", 3)) > 0.1


def test_f_alpha_antitone_in_refinement():
    # finer partitions mean more factors to break off: f can only grow
    psi = random_state((2, 2, 2), seed=8)
    for a in all_partitions(3):
        for b in all_partitions(3):
            if a.refines(b):
                assert f_alpha(psi, a) >= f_alpha(psi, b) - 1e-12


def test_f_label_vanishes_iff_any_member_vanishes():
    psi = bisep_23()
    lab_hit = frozenset({Partition.parse("1|23", 3), Partition.parse("12|3", 3)})
    lab_miss = frozenset({Partition.parse("12|3", 3), Partition.parse("13|2", 3)})
    assert f_label(psi, lab_hit) == pytest.approx(0.0, abs=1e-12)
    assert f_label(psi, lab_miss) > 0.01
    with pytest.raises(ValueError):
        f_label(psi, frozenset())


def test_m_indicators_require_concave_entropy():
    psi = ghz()
    bad = EntropySpec("renyi", 2.0)
    with pytest.raises(ValueError):
        m_alpha(psi, Partition.parse("1|23", 3), bad)
    with pytest.raises(ValueError):
        m_label(psi, frozenset({Partition.parse("1|23", 3)}), bad)
    with pytest.raises(ValueError):
        IndicatorSpec(frozenset({Partition.parse("1|23", 3)}), bad,
                      combiner="geometricMean")


def test_m_versions_are_means_of_f_versions():
    psi = random_state((2, 2, 2), seed=9)
    alpha = Partition.parse("1|2|3", 3)
    assert m_alpha(psi, alpha) == pytest.approx(f_alpha(psi, alpha) / 3, abs=1e-12)
    label = frozenset({Partition.parse("1|23", 3), Partition.parse("12|3", 3)})
    expected = math.sqrt(m_alpha(psi, Partition.parse("1|23", 3))
                         * m_alpha(psi, Partition.parse("12|3", 3)))
    assert m_label(psi, label) == pytest.approx(expected, abs=1e-12)


def test_indicator_spec_evaluate_matches_functions():
    psi = random_state((2, 2, 2), seed=10)
    label = frozenset({Partition.parse("1|23", 3), Partition.parse("13|2", 3)})
    plain = IndicatorSpec(label)
    assert plain.evaluate(psi) == pytest.approx(f_label(psi, label), abs=1e-12)
    mono = IndicatorSpec(label, combiner="geometricMean",
                         block_combiner="arithmeticMean")
    assert mono.evaluate(psi) == pytest.approx(m_label(psi, label), abs=1e-12)


def test_geometric_mean_inequality_random_instances():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m, q = rng.integers(1, 6), rng.integers(1, 5)
        x = rng.random((m, q)) * rng.exponential(1.0)
        p = rng.dirichlet(np.ones(m))
        assert geometric_mean_average_inequality_check(p, x)


def test_geometric_mean_inequality_input_validation():
    with pytest.raises(ValueError):
        geometric_mean_average_inequality_check([1.0], [[-1.0, 2.0]])
    with pytest.raises(ValueError):
        geometric_mean_average_inequality_check([0.5, 0.2], [[1.0], [1.0]])


def test_label_objective_matches_f_label():
    rng = np.random.default_rng(12)
    dims = (2, 2, 2)
    batch = rng.standard_normal((6, 8)) + 1j * rng.standard_normal((6, 8))
    batch /= np.linalg.norm(batch, axis=1, keepdims=True)
    for label in enumerate_proper_labels(3):
        values, _ = label_objective(dims, label)
        got = values(batch)
        expected = np.array([
            f_label(StateVector(dims, row), label) for row in batch
        ])
        assert np.abs(got - expected).max() < 1e-10


@pytest.mark.parametrize("entropy", [
    DEFAULT_ENTROPY,
    EntropySpec("vonNeumann"),
    EntropySpec("tsallis", 1.5),
])
def test_label_objective_wirtinger_matches_finite_differences(entropy):
    rng = np.random.default_rng(13)
    dims = (2, 2, 2)
    label = frozenset({Partition.parse("1|23", 3), Partition.parse("13|2", 3)})
    values, wirtinger = label_objective(dims, label, entropy)
    psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    psi /= np.linalg.norm(psi)
    w = wirtinger(psi[None, :])[0]
    eps = 1e-6
    for m in range(8):
        bump = np.zeros(8, complex)
        bump[m] = eps
        fd_re = (values((psi + bump)[None, :])[0]
                 - values((psi - bump)[None, :])[0]) / (2 * eps)
        fd_im = (values((psi + 1j * bump)[None, :])[0]
                 - values((psi - 1j * bump)[None, :])[0]) / (2 * eps)
        assert fd_re == pytest.approx(2 * w[m].real, abs=5e-5)
        assert fd_im == pytest.approx(2 * w[m].imag, abs=5e-5)


def test_label_objective_nonqubit_dims():
    rng = np.random.default_rng(14)
    dims = (3, 2, 2)
    d = 12
    label = frozenset({Partition.parse("1|23", 3)})
    values, wirtinger = label_objective(dims, label)
    batch = rng.standard_normal((4, d)) + 1j * rng.standard_normal((4, d))
    batch /= np.linalg.norm(batch, axis=1, keepdims=True)
    got = values(batch)
    expected = np.array([
        f_label(StateVector(dims, row), label) for row in batch
    ])
    assert np.abs(got - expected).max() < 1e-10
    assert wirtinger(batch).shape == (4, d)


def test_reduction_handles_unnormalized_vectors():
    psi = StateVector((2, 2), np.array([2.0, 0, 0, 0], complex))
    red = reduction(psi, (1,))
    assert red[0, 0] == pytest.approx(4.0)
