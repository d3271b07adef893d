import math

import numpy as np
import pytest

from partsep.classify import (
    ClassificationError,
    classify_mixed_3q,
    classify_pure_3q,
    classify_pure_general,
    class_function_pattern,
    npt_side_information,
)
from partsep.corpus import _c21_mixture, _c22_mixture
from partsep.labels import enumerate_ps_classes, tripartite_class_name
from partsep.states import (
    DensityMatrix,
    StateVector,
    apply_local,
    random_local_invertible,
    random_local_unitary,
    random_state,
)

R2 = 1.0 / math.sqrt(2.0)
R3 = 1.0 / math.sqrt(3.0)


def vec(pairs):
    amps = np.zeros(8, dtype=complex)
    for idx, val in pairs:
        amps[idx] = val
    return StateVector((2, 2, 2), amps)


GHZ = vec([(0, R2), (7, R2)])
W = vec([(1, R3), (2, R3), (4, R3)])
BISEP = {
    "1|23": vec([(0, R2), (3, R2)]),
    "13|2": vec([(0, R2), (5, R2)]),
    "12|3": vec([(0, R2), (6, R2)]),
}
PRODUCT = vec([(0, 1.0)])


# ---------------------------------------------------------------------------
# pure classifier

@pytest.mark.parametrize("state,want", [
    (GHZ, "GHZ"), (W, "W"), (PRODUCT, "1|2|3"),
    (BISEP["1|23"], "1|23"), (BISEP["13|2"], "13|2"), (BISEP["12|3"], "12|3"),
])
def test_pure_classes_of_named_states(state, want):
    assert classify_pure_3q(state).class_id == want


def test_null_state():
    verdict = classify_pure_3q(np.zeros(8))
    assert verdict.class_id == "Null"


def test_unnormalized_input_is_classified_after_normalization():
    amps = 7.5 * GHZ.amplitudes
    assert classify_pure_3q(amps).class_id == "GHZ"


def test_pure_class_invariant_under_local_unitaries():
    for k, (state, want) in enumerate([(GHZ, "GHZ"), (W, "W"),
                                       (BISEP["13|2"], "13|2")]):
        for j in range(3):
            ops = random_local_unitary((2, 2, 2), seed=10 * k + j)
            assert classify_pure_3q(apply_local(ops, state)).class_id == want


def test_pure_class_invariant_under_invertible_local_maps():
    for k, (state, want) in enumerate([(GHZ, "GHZ"), (W, "W"),
                                       (BISEP["1|23"], "1|23"),
                                       (PRODUCT, "1|2|3")]):
        for j in range(3):
            ops = random_local_invertible((2, 2, 2), seed=20 * k + j)
            mapped = apply_local(ops, state)
            assert classify_pure_3q(mapped).class_id == want


def test_wrong_dims_rejected():
    with pytest.raises(ValueError):
        classify_pure_3q(random_state((2, 2), seed=1))


def test_general_classifier_agrees_on_three_qubits():
    table = {"GHZ": "123", "W": "123", "1|2|3": "1|2|3",
             "1|23": "1|23", "13|2": "13|2", "12|3": "12|3"}
    for state in (GHZ, W, PRODUCT, *BISEP.values()):
        verdict = classify_pure_3q(state).class_id
        assert str(classify_pure_general(state)) == table[verdict]


def test_general_classifier_on_four_parties():
    a = random_state((2,), seed=2).amplitudes
    bell = np.array([R2, 0, 0, R2], dtype=complex)
    joint = np.kron(np.kron(a, bell), random_state((2,), seed=3).amplitudes)
    psi = StateVector((2, 2, 2, 2), joint)
    assert str(classify_pure_general(psi)) == "1|23|4"


def test_general_classifier_qudit_dims():
    amps = np.zeros(16, dtype=complex)
    amps[[0, 5, 10, 15]] = 0.5
    psi = StateVector((4, 2, 2), amps)
    assert str(classify_pure_general(psi)) == "123"


def test_general_classifier_rejects_zero_and_large_n():
    with pytest.raises(ValueError):
        classify_pure_general(StateVector((2,), np.zeros(2, complex)))
    with pytest.raises(ValueError):
        classify_pure_general(random_state((2,) * 7, seed=4))


# ---------------------------------------------------------------------------
# table of class rows

def test_class_rows_are_distinct_and_monotone():
    rows = {}
    for cls in enumerate_ps_classes(3, pss_extension=True):
        name = tripartite_class_name(cls)
        pattern = class_function_pattern(cls)
        rows[name] = pattern
    assert len(rows) == 21
    # distinct rows: the table separates every pair of classes
    seen = set()
    for pattern in rows.values():
        key = tuple(sorted(pattern.items()))
        assert key not in seen
        seen.add(key)
    # hierarchy sanity on a few named rows
    assert rows["C3"] == {k: True for k in rows["C3"]}
    assert rows["CGHZ"] == {k: False for k in rows["CGHZ"]}
    assert rows["CW"]["tau2"] is True and rows["CW"]["t"] is False
    assert rows["C2.1"]["t"] is True and rows["C2.1"]["g1"] is False
    assert rows["C2.2.1"]["g1"] is True and rows["C2.2.1"]["g2"] is False


# ---------------------------------------------------------------------------
# NPT side information

def test_npt_flags_of_section_iv_mixtures():
    assert npt_side_information(_c22_mixture(1)) == {"12": True, "13": True, "23": False}
    assert npt_side_information(_c22_mixture(2)) == {"12": True, "13": False, "23": True}
    assert npt_side_information(_c22_mixture(3)) == {"12": False, "13": True, "23": True}
    assert npt_side_information(_c21_mixture()) == {"12": True, "13": True, "23": True}


def test_npt_flags_of_ghz_are_all_ppt():
    assert npt_side_information(GHZ.density_matrix()) == {
        "12": False, "13": False, "23": False}


# ---------------------------------------------------------------------------
# mixed classifier

@pytest.mark.parametrize("a", [1, 2, 3])
def test_c22_mixtures_resolve(a):
    verdict = classify_mixed_3q(_c22_mixture(a), seed=1)
    assert verdict.resolved == f"C2.2.{a}"
    assert verdict.flags[f"g{a}"] == "ZERO"
    assert verdict.roof_values[f"g{a}"] <= 1e-5
    # all other certified flags came from exclusions, not roofs
    assert set(verdict.roof_values) == {f"g{a}"}


def test_c21_mixture_resolves():
    verdict = classify_mixed_3q(_c21_mixture(), seed=1)
    assert verdict.resolved == "C2.1"
    assert verdict.flags["t"] == "ZERO"
    assert verdict.flags["tau2"] == "ZERO"
    assert set(verdict.roof_values) == {"t"}


def test_rank_one_states_resolve_exactly():
    assert classify_mixed_3q(GHZ.density_matrix()).resolved == "CGHZ"
    assert classify_mixed_3q(W.density_matrix()).resolved == "CW"
    assert classify_mixed_3q(PRODUCT.density_matrix()).resolved == "C3"
    assert classify_mixed_3q(BISEP["13|2"].density_matrix()).resolved == "C2.5.2"


def test_fully_separable_mixture_resolves_to_c3():
    p0 = PRODUCT.amplitudes
    plus = np.full(8, R2**3, dtype=complex)
    rho = DensityMatrix((2, 2, 2),
                        0.5 * np.outer(p0, p0.conj()) + 0.5 * np.outer(plus, plus.conj()))
    verdict = classify_mixed_3q(rho, seed=2)
    assert verdict.resolved == "C3"
    assert all(flag == "ZERO" for flag in verdict.flags.values())


def test_mult_function_set_agrees_on_separable_mixture():
    p0 = PRODUCT.amplitudes
    plus = np.full(8, R2**3, dtype=complex)
    rho = DensityMatrix((2, 2, 2),
                        0.5 * np.outer(p0, p0.conj()) + 0.5 * np.outer(plus, plus.conj()))
    verdict = classify_mixed_3q(rho, functions="mult", seed=2)
    assert verdict.resolved == "C3"


def test_mult_is_default_for_qudits_and_omits_w_level():
    rng = np.random.default_rng(5)
    vecs = []
    for _ in range(2):
        a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        bc = np.kron(rng.standard_normal(2) + 1j * rng.standard_normal(2),
                     rng.standard_normal(2) + 1j * rng.standard_normal(2))
        v = np.kron(a, bc)
        vecs.append(v / np.linalg.norm(v))
    mat = sum(np.outer(v, v.conj()) for v in vecs) / 2
    verdict = classify_mixed_3q(DensityMatrix((3, 2, 2), mat), seed=3)
    assert "tau2" not in verdict.flags
    assert verdict.resolved == "C3"


def test_fts_rejected_for_qudits():
    rho = random_state((3, 2, 2), seed=6).density_matrix()
    with pytest.raises(ValueError):
        classify_mixed_3q(rho, functions="fts")


def test_positive_evidence_never_resolves():
    # GHZ-Werner reductions are PPT and no roof vanishes: everything stays viable
    ghz = GHZ.amplitudes
    rho = DensityMatrix((2, 2, 2),
                        0.7 * np.outer(ghz, ghz.conj()) + 0.3 * np.eye(8) / 8)
    verdict = classify_mixed_3q(rho, seed=4, restarts=2, max_iters=60)
    assert verdict.resolved == "AMBIGUOUS"
    assert len(verdict.candidates) == 21
    assert all(flag == "POSITIVE_UNKNOWN" for flag in verdict.flags.values())


def test_verdict_serialization():
    verdict = classify_mixed_3q(_c22_mixture(1), seed=1)
    data = verdict.to_dict()
    assert data["resolved"] == "C2.2.1"
    assert data["seed"] == 1
    assert set(data["npt"]) == {"12", "13", "23"}


def test_mixed_classifier_rejects_bipartite_input():
    with pytest.raises(ValueError):
        classify_mixed_3q(random_state((2, 2), seed=7).density_matrix())
