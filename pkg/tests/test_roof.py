import math

import numpy as np
import pytest

from partsep import threequbit as tq
from partsep.indicators import label_objective
from partsep.partitions import Partition
from partsep.roof import (
    Decomposition,
    PureStateFunction,
    concave_roof,
    convex_roof,
    decomposition_from_isometry,
    membership_certificate,
)
from partsep.states import (
    DensityMatrix,
    SpectralDecomposition,
    StateVector,
    partial_trace,
    random_state,
)

R2 = 1.0 / math.sqrt(2.0)

CONCURRENCE = PureStateFunction(tq.concurrence_values, tq.concurrence_wirtinger, "c")
G1 = PureStateFunction(lambda p: tq.g_values(p, 1), lambda p: tq.g_wirtinger(p, 1), "g1")
Y = PureStateFunction(tq.y_values, tq.y_wirtinger, "y")


def rank2_reduction(seed: int) -> DensityMatrix:
    return partial_trace(random_state((2, 2, 2), seed=seed).density_matrix(), (2, 3))


def test_decomposition_validation():
    good = Decomposition([0.5, 0.5], np.eye(4, dtype=complex)[:2])
    assert good.weights.sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        Decomposition([0.5, 0.6], np.eye(4, dtype=complex)[:2])
    with pytest.raises(ValueError):
        Decomposition([1.5, -0.5], np.eye(4, dtype=complex)[:2])
    with pytest.raises(ValueError):
        Decomposition([0.5, 0.5], 2 * np.eye(4, dtype=complex)[:2])


def test_decomposition_from_isometry_reconstructs_rho():
    rho = rank2_reduction(seed=1)
    spec = SpectralDecomposition.of(rho)
    rng = np.random.default_rng(2)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    q, _ = np.linalg.qr(a)
    dec = decomposition_from_isometry(spec, q[:, : spec.rank])
    mix = sum(p * np.outer(s, s.conj()) for p, s in zip(dec.weights, dec.states))
    assert np.abs(mix - rho.matrix).max() < 1e-10


def test_rank_one_short_circuit_is_exact():
    psi = random_state((2, 2), seed=3)
    rho = psi.density_matrix()
    res = convex_roof(rho, CONCURRENCE, seed=7)
    assert res.restarts_used == 0
    assert res.converged
    assert res.value == pytest.approx(tq.pure_concurrence(psi.amplitudes), abs=1e-12)
    assert len(res.decomposition.weights) == 1


def test_convex_roof_matches_wootters_closed_form():
    for seed in range(10):
        rho = rank2_reduction(seed=seed)
        closed = tq.wootters_concurrence(rho)
        res = convex_roof(rho, CONCURRENCE, restarts=8, seed=seed)
        assert res.value >= closed - 1e-6
        assert res.value <= closed + 1e-4


def test_concave_roof_matches_fidelity_closed_form():
    for seed in range(10):
        rho = rank2_reduction(seed=seed)
        closed = tq.fidelity_concurrence(rho)
        res = concave_roof(rho, CONCURRENCE, restarts=8, seed=seed)
        assert res.value <= closed + 1e-6
        assert res.value >= closed - 1e-4


def test_concave_at_least_convex():
    rho = rank2_reduction(seed=11)
    lo = convex_roof(rho, CONCURRENCE, restarts=4, seed=0).value
    hi = concave_roof(rho, CONCURRENCE, restarts=4, seed=0).value
    assert hi >= lo - 1e-10


def test_deterministic_for_fixed_seed():
    rho = rank2_reduction(seed=13)
    a = convex_roof(rho, CONCURRENCE, restarts=6, seed=42)
    b = convex_roof(rho, CONCURRENCE, restarts=6, seed=42)
    assert a.value == b.value
    assert a.seed == b.seed == 42
    c = convex_roof(rho, CONCURRENCE, restarts=6, seed=43)
    assert c.seed == 43


def test_jobs_do_not_change_the_result():
    rho = rank2_reduction(seed=17)
    serial = convex_roof(rho, CONCURRENCE, restarts=6, seed=5, jobs=1)
    threaded = convex_roof(rho, CONCURRENCE, restarts=6, seed=5, jobs=3)
    assert serial.value == pytest.approx(threaded.value, abs=0)


def test_monotone_in_ensemble_size():
    rho = rank2_reduction(seed=19)
    small = convex_roof(rho, CONCURRENCE, m=2, restarts=8, seed=1).value
    large = convex_roof(rho, CONCURRENCE, m=6, restarts=8, seed=1).value
    assert large <= small + 1e-6


def test_roof_output_is_convex_spot_check():
    rng = np.random.default_rng(23)
    for _ in range(3):
        r1 = rank2_reduction(seed=int(rng.integers(100, 200)))
        r2 = rank2_reduction(seed=int(rng.integers(200, 300)))
        lam = float(rng.uniform())
        mix = DensityMatrix((2, 2), lam * r1.matrix + (1 - lam) * r2.matrix)
        v_mix = convex_roof(mix, CONCURRENCE, restarts=8, seed=2).value
        v_split = (lam * convex_roof(r1, CONCURRENCE, restarts=8, seed=2).value
                   + (1 - lam) * convex_roof(r2, CONCURRENCE, restarts=8, seed=2).value)
        assert v_mix <= v_split + 2e-4


def test_separable_mixture_certifies_zero():
    # equal mixture of two nonorthogonal product states
    p0 = np.zeros(8, complex)
    p0[0] = 1.0
    plus = np.full(8, R2**3, dtype=complex)
    rho = DensityMatrix((2, 2, 2),
                        0.5 * np.outer(p0, p0.conj()) + 0.5 * np.outer(plus, plus.conj()))
    res = convex_roof(rho, Y, restarts=16, seed=3)
    assert res.value <= 1e-5
    assert res.converged
    # the certifying decomposition really averages to rho
    mix = sum(p * np.outer(s, s.conj())
              for p, s in zip(res.decomposition.weights, res.decomposition.states))
    assert np.abs(mix - rho.matrix).max() < 1e-8


def test_g1_roof_vanishes_on_pair_separable_mixture():
    b13 = np.zeros(8, complex)
    b13[[0, 5]] = R2
    b12 = np.zeros(8, complex)
    b12[[0, 6]] = R2
    rho = DensityMatrix((2, 2, 2),
                        0.5 * np.outer(b13, b13.conj()) + 0.5 * np.outer(b12, b12.conj()))
    res = convex_roof(rho, G1, restarts=8, seed=4)
    assert res.value <= 1e-5


def test_result_serialization_round_trip():
    rho = rank2_reduction(seed=29)
    res = convex_roof(rho, CONCURRENCE, restarts=4, seed=9)
    data = res.to_dict()
    assert set(data) == {"value", "converged", "restarts_used", "seed", "decomposition"}
    assert len(data["decomposition"]["p"]) == len(data["decomposition"]["states"])


def test_membership_certificate_in_and_unknown():
    b13 = np.zeros(8, complex)
    b13[[0, 5]] = R2
    b12 = np.zeros(8, complex)
    b12[[0, 6]] = R2
    rho = DensityMatrix((2, 2, 2),
                        0.5 * np.outer(b13, b13.conj()) + 0.5 * np.outer(b12, b12.conj()))
    pair1 = frozenset({Partition.parse("13|2", 3), Partition.parse("12|3", 3)})
    cert = membership_certificate(rho, pair1, restarts=8, seed=5)
    assert cert["verdict"] == "IN"
    assert cert["result"].value <= 1e-5

    ghz = np.zeros(8, complex)
    ghz[[0, 7]] = R2
    pure = StateVector((2, 2, 2), ghz).density_matrix()
    bot = frozenset({Partition.parse("1|2|3", 3)})
    cert = membership_certificate(pure, bot, restarts=2, seed=5)
    assert cert["verdict"] == "UNKNOWN"


def test_label_objective_plugs_into_roof():
    rho = rank2_reduction(seed=31)
    # two-qubit full split: the roof of the pairwise Tsallis-2 indicator
    label = frozenset({Partition.parse("1|2", 2)})
    values, wirt = label_objective((2, 2), label)
    f = PureStateFunction(values, wirt, "f_12")
    res = convex_roof(rho, f, restarts=8, seed=6)
    closed = tq.wootters_concurrence(rho)
    # f_12 vanishes exactly where concurrence does
    assert (res.value <= 1e-5) == (closed <= 1e-5)
