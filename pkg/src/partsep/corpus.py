"""Built-in corpus of named reference states with re-derivable verdicts.

Every entry bundles a state with the verdicts the toolkit is expected to
reproduce.  ``run_corpus`` re-derives them and reports pass/fail; it is
the quickest end-to-end health check of the whole package.

Check tolerances: closed-form indicator values to 1e-9, entropies to
1e-9, classifier verdicts by exact name, roof-backed verdicts inherit
the classifier's vanishing tolerance of 1e-5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classify import classify_mixed_3q, classify_pure_3q, classify_pure_general, npt_side_information
from .states import DensityMatrix, StateVector, partial_trace, von_neumann_entropy
from .threequbit import indicator_vector, wootters_concurrence

_R2 = 1.0 / math.sqrt(2.0)
_R3 = 1.0 / math.sqrt(3.0)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str  # "pure" or "mixed"
    state: object  # StateVector or DensityMatrix
    expected: dict
    note: str

    @property
    def dims(self) -> tuple:
        return self.state.dims


def _vec3(pairs) -> StateVector:
    amps = np.zeros(8, dtype=complex)
    for idx, val in pairs:
        amps[idx] = val
    return StateVector((2, 2, 2), amps)


def _mix(terms) -> DensityMatrix:
    mat = sum(p * s.density_matrix().matrix for p, s in terms)
    return DensityMatrix((2, 2, 2), mat)


# the three pure biseparable representatives, keyed by the isolated subsystem
_BISEP = {
    1: _vec3([(0, _R2), (3, _R2)]),  # |0>_1 (|00>+|11>)_23
    2: _vec3([(0, _R2), (5, _R2)]),  # |0>_2 (|00>+|11>)_13
    3: _vec3([(0, _R2), (6, _R2)]),  # |0>_3 (|00>+|11>)_12
}
_BISEP_EXCITED_1 = _vec3([(4, _R2), (7, _R2)])  # |1>_1 (|00>+|11>)_23


def _psi_m() -> StateVector:
    eta0 = (5.0 - math.sqrt(7.0)) / 6.0
    w = 0.5 * math.sqrt((1.0 + math.sqrt(7.0)) / 6.0)
    return _vec3([(0, math.sqrt(eta0)), (4, -w), (5, w), (6, w), (7, w)])


def _neumann_counterexample() -> StateVector:
    amps = np.zeros(16, dtype=complex)
    # (|000> + |101> + |210> + |311>) / 2 on dims (4, 2, 2)
    amps[[0, 5, 10, 15]] = 0.5
    return StateVector((4, 2, 2), amps)


def _c22_mixture(a: int) -> DensityMatrix:
    b, c = sorted({1, 2, 3} - {a})
    return _mix([(0.5, _BISEP[b]), (0.5, _BISEP[c])])


def _c21_mixture() -> DensityMatrix:
    return _mix([(0.25, _BISEP[2]), (0.25, _BISEP[3]), (0.5, _BISEP_EXCITED_1)])


def _bisep_invariants(a: int) -> dict:
    s = [1.0, 1.0, 1.0]
    g = [0.0, 0.0, 0.0]
    s[a - 1] = 0.0
    g[a - 1] = 1.0
    return {
        "n": 1.0, "y": 2.0 / 3.0,
        "s1": s[0], "s2": s[1], "s3": s[2],
        "g1": g[0], "g2": g[1], "g3": g[2],
        "t": 0.0, "tau2": 0.0,
    }


def corpus() -> list[CorpusEntry]:
    """All reference states, pure ones first."""
    entries = [
        CorpusEntry(
            name="bell",
            kind="pure",
            state=StateVector((2, 2), np.array([_R2, 0, 0, _R2], dtype=complex)),
            expected={"concurrence": 1.0},
            note="maximally entangled two-qubit pair",
        ),
        CorpusEntry(
            name="product-000",
            kind="pure",
            state=_vec3([(0, 1.0)]),
            expected={"pure_class": "1|2|3", "partition": "1|2|3",
                      "invariants": {"n": 1.0, "y": 0.0, "t": 0.0, "tau2": 0.0}},
            note="fully product three-qubit state",
        ),
        CorpusEntry(
            name="ghz",
            kind="pure",
            state=_vec3([(0, _R2), (7, _R2)]),
            expected={"pure_class": "GHZ", "partition": "123",
                      "invariants": {"n": 1.0, "y": 1.0,
                                     "s1": 1.0, "s2": 1.0, "s3": 1.0,
                                     "g1": 0.5, "g2": 0.5, "g3": 0.5,
                                     "t": 1.0, "tau2": 1.0}},
            note="maximal three-tangle state",
        ),
        CorpusEntry(
            name="w",
            kind="pure",
            state=_vec3([(1, _R3), (2, _R3), (4, _R3)]),
            expected={"pure_class": "W", "partition": "123",
                      "invariants": {"n": 1.0, "y": 8.0 / 9.0,
                                     "s1": 8.0 / 9.0, "s2": 8.0 / 9.0, "s3": 8.0 / 9.0,
                                     "g1": 4.0 / 9.0, "g2": 4.0 / 9.0, "g3": 4.0 / 9.0,
                                     "t": 16.0 / 27.0, "tau2": 0.0}},
            note="tripartite entanglement with vanishing three-tangle",
        ),
    ]
    for a, part in ((1, "1|23"), (2, "13|2"), (3, "12|3")):
        entries.append(CorpusEntry(
            name=f"bisep-{part.replace('|', '-')}",
            kind="pure",
            state=_BISEP[a],
            expected={"pure_class": part, "partition": part,
                      "invariants": _bisep_invariants(a)},
            note=f"subsystem {a} in a product with a Bell pair of the other two",
        ))
    for a in (1, 2, 3):
        entries.append(CorpusEntry(
            name=f"c22-mixture-{a}",
            kind="mixed",
            state=_c22_mixture(a),
            expected={"mixed_class": f"C2.2.{a}",
                      "npt": {key: (str(a) in key) for key in ("12", "13", "23")}},
            note="equal mixture of the two biseparable states not isolating "
                 f"subsystem {a}; pair-{a} separable with both other reductions entangled",
        ))
    entries.append(CorpusEntry(
        name="c21-mixture",
        kind="mixed",
        state=_c21_mixture(),
        expected={"mixed_class": "C2.1",
                  "npt": {"12": True, "13": True, "23": True}},
        note="three-way biseparable mixture with every two-qubit reduction entangled",
    ))
    entries.append(CorpusEntry(
        name="psi-m",
        kind="pure",
        state=_psi_m(),
        expected={"pure_class": "GHZ",
                  "invariants": {"n": 1.0, "t": (10.0 + 7.0 * math.sqrt(7.0)) / 54.0}},
        note="local (non-global) maximum of the two-separability indicator t",
    ))
    entries.append(CorpusEntry(
        name="neumann-counterexample",
        kind="pure",
        state=_neumann_counterexample(),
        expected={"partition": "123",
                  "vn_entropies": {1: math.log(4.0), 2: math.log(2.0), 3: math.log(2.0)},
                  "vn_g1": 0.0},
        note="(4,2,2) state whose von-Neumann pair indicator "
             "(S2+S3-S1)/2 vanishes despite genuine tripartite entanglement",
    ))
    return entries


def verify_entry(entry: CorpusEntry, restarts: int = 32, seed: int = 0,
                 jobs: int = 1) -> list[tuple[str, bool, str]]:
    """Re-derive each expected verdict; returns (check, ok, detail) triples."""
    results = []
    exp = entry.expected

    if "concurrence" in exp:
        value = wootters_concurrence(entry.state.density_matrix())
        ok = abs(value - exp["concurrence"]) <= 1e-9
        results.append(("concurrence", ok, f"{value:.12f}"))
    if "pure_class" in exp:
        verdict = classify_pure_3q(entry.state)
        ok = verdict.class_id == exp["pure_class"]
        results.append(("pure_class", ok, verdict.class_id))
    if "partition" in exp:
        part = classify_pure_general(entry.state)
        ok = str(part) == exp["partition"]
        results.append(("partition", ok, str(part)))
    if "invariants" in exp:
        vec = indicator_vector(entry.state).to_dict()
        bad = {k: vec[k] for k, v in exp["invariants"].items()
               if abs(vec[k] - v) > 1e-9}
        results.append(("invariants", not bad, "ok" if not bad else f"off: {bad}"))
    if "npt" in exp:
        npt = npt_side_information(entry.state)
        ok = npt == exp["npt"]
        results.append(("npt", ok, str(npt)))
    if "mixed_class" in exp:
        verdict = classify_mixed_3q(entry.state, restarts=restarts, seed=seed, jobs=jobs)
        ok = verdict.resolved == exp["mixed_class"]
        results.append(("mixed_class", ok, verdict.resolved))
    if "vn_entropies" in exp:
        ents = {a: von_neumann_entropy(partial_trace(entry.state.density_matrix(), (a,)))
                for a in (1, 2, 3)}
        bad = {a: ents[a] for a, v in exp["vn_entropies"].items()
               if abs(ents[a] - v) > 1e-9}
        results.append(("vn_entropies", not bad, "ok" if not bad else f"off: {bad}"))
    if "vn_g1" in exp:
        rho = entry.state.density_matrix()
        s = [von_neumann_entropy(partial_trace(rho, (a,))) for a in (1, 2, 3)]
        g1 = 0.5 * (s[1] + s[2] - s[0])
        ok = abs(g1 - exp["vn_g1"]) <= 1e-9
        results.append(("vn_g1", ok, f"{g1:.3e}"))
    return results


def run_corpus(restarts: int = 32, seed: int = 0, jobs: int = 1) -> dict:
    """Verify every entry; overall ``passed`` is True only if all checks pass."""
    report = {"entries": [], "passed": True}
    for entry in corpus():
        checks = verify_entry(entry, restarts=restarts, seed=seed, jobs=jobs)
        ok = all(c[1] for c in checks)
        report["entries"].append({
            "name": entry.name,
            "passed": ok,
            "checks": [{"check": c, "passed": p, "detail": d} for c, p, d in checks],
        })
        report["passed"] = report["passed"] and ok
    return report
