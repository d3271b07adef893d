"""Class assignment for pure and mixed states.

Pure three-qubit states fall into one of seven vanishing patterns of the
indicator vector (n, y, s_a, g_a, t, tau^2); general pure states are
classified by their finest separating partition.

Mixed three-qubit states are assigned a partial-separability class by
combining three kinds of evidence, none of which is ever guessed:

* convex-roof ZERO certificates (a vanishing decomposition was found),
* NPT exclusions (an entangled two-qubit reduction rules whole subsets out),
* the inclusion hierarchy of the subsets (ZERO propagates upward,
  exclusion propagates downward).

Positivity of a roof is numerically uncertifiable (an optimizer failure
looks the same), so any class row consistent with the evidence stays
viable; if more than one remains the verdict is AMBIGUOUS and lists the
candidates, with one exception: a rank-one state has a unique
decomposition, making the roof values exact, so positives are certified
there and the class resolves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import threequbit as tq
from .indicators import DEFAULT_ENTROPY, EntropySpec, f_alpha, label_objective
from .labels import ClassLabel, enumerate_ps_classes, tripartite_class_name, _tripartite_atoms
from .partitions import Partition, all_partitions
from .roof import PureStateFunction, convex_roof
from .states import DensityMatrix, SpectralDecomposition, StateVector, is_ppt, partial_trace

PURE_THRESHOLD = 1e-7
ROOF_THRESHOLD = 1e-5

FUNCTION_KEYS = ("y", "s1", "s2", "s3", "g1", "g2", "g3", "t", "tau2")

ZERO = "ZERO"
EXCLUDED = "EXCLUDED"
UNKNOWN = "POSITIVE_UNKNOWN"


class ClassificationError(ValueError):
    """Raised when numerical evidence matches no class or contradicts itself."""

    def __init__(self, message, vector=None):
        super().__init__(message)
        self.vector = vector


# ---------------------------------------------------------------------------
# pure states

@dataclass(frozen=True)
class PureClassVerdict:
    class_id: str
    pattern: dict  # function key -> bool (vanishes)
    vector: tq.InvariantVector

    def to_dict(self) -> dict:
        return {
            "class": self.class_id,
            "pattern": self.pattern,
            "invariants": self.vector.to_dict(),
        }


# vanishing pattern of each pure class over (y, s1, s2, s3, g1, g2, g3, t, tau2)
_PURE_ROWS = {
    "1|2|3": (1, 1, 1, 1, 1, 1, 1, 1, 1),
    "1|23": (0, 1, 0, 0, 0, 1, 1, 1, 1),
    "13|2": (0, 0, 1, 0, 1, 0, 1, 1, 1),
    "12|3": (0, 0, 0, 1, 1, 1, 0, 1, 1),
    "W": (0, 0, 0, 0, 0, 0, 0, 0, 1),
    "GHZ": (0, 0, 0, 0, 0, 0, 0, 0, 0),
}


def classify_pure_3q(psi, threshold: float = PURE_THRESHOLD) -> PureClassVerdict:
    """Match a three-qubit vector against the seven pure vanishing patterns."""
    if isinstance(psi, StateVector) and psi.dims != (2, 2, 2):
        raise ValueError(f"expected a three-qubit state, got dims {psi.dims}")
    vec = tq.indicator_vector(psi)
    if vec.n <= threshold:
        return PureClassVerdict("Null", {k: True for k in ("n",) + FUNCTION_KEYS}, vec)

    amps = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi)
    vec = tq.indicator_vector(np.asarray(amps) / np.sqrt(vec.n))
    values = dict(zip(FUNCTION_KEYS, vec.values()[1:]))
    zeros = {k: bool(v <= threshold) for k, v in values.items()}
    for class_id, row in _PURE_ROWS.items():
        if all(zeros[k] == bool(z) for k, z in zip(FUNCTION_KEYS, row)):
            return PureClassVerdict(class_id, {"n": False, **zeros}, vec)
    raise ClassificationError(
        f"no pure class matches the vanishing pattern {zeros}", vector=vec
    )


def classify_pure_general(psi: StateVector, entropy: EntropySpec = DEFAULT_ENTROPY,
                          threshold: float = PURE_THRESHOLD) -> Partition:
    """The finest partition under which the pure state separates.

    Works for any dims with n <= 6 subsystems.  The vanishing set of
    f_alpha is an up-set of the partition lattice; its unique minimal
    element is the verdict.
    """
    if psi.n > 6:
        raise ValueError("general pure classification supports up to 6 subsystems")
    nrm = psi.norm()
    if nrm == 0:
        raise ValueError("cannot classify the zero vector")
    psi = StateVector(psi.dims, psi.amplitudes / nrm)
    vanishing = [
        alpha for alpha in all_partitions(psi.n)
        if f_alpha(psi, alpha, entropy) <= threshold
    ]
    minimal = [
        a for a in vanishing
        if not any(b != a and b.refines(a) for b in vanishing)
    ]
    if len(minimal) != 1:
        raise ClassificationError(
            f"vanishing partitions have {len(minimal)} minimal elements, expected one",
            vector=sorted(str(a) for a in vanishing),
        )
    return minimal[0]


# ---------------------------------------------------------------------------
# subset algebra shared by the mixed classifier

def _subset_order() -> dict[str, set[str]]:
    """above[f] = all keys whose subset contains the subset of f."""
    direct = {
        "y": {"s1", "s2", "s3"},
        "s1": {"g2", "g3"},
        "s2": {"g1", "g3"},
        "s3": {"g1", "g2"},
        "g1": {"t"},
        "g2": {"t"},
        "g3": {"t"},
        "t": {"tau2"},
        "tau2": set(),
    }
    above = {}
    for key in direct:
        seen = set()
        stack = [key]
        while stack:
            for nxt in direct[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        above[key] = seen
    return above

_ABOVE = _subset_order()
_BELOW = {k: {j for j in FUNCTION_KEYS if k in _ABOVE[j]} for k in FUNCTION_KEYS}


def class_function_pattern(cls: ClassLabel) -> dict[str, bool]:
    """Table row of a three-party class: key -> True when the roof vanishes."""
    bot, single, pair, twosep, topl = _tripartite_atoms()
    inc = cls.included
    pattern = {
        "y": bot in inc,
        "s1": single[1] in inc, "s2": single[2] in inc, "s3": single[3] in inc,
        "g1": pair[1] in inc, "g2": pair[2] in inc, "g3": pair[3] in inc,
        "t": twosep in inc,
    }
    if cls.w_flag is not None:
        pattern["tau2"] = cls.w_flag
    else:
        pattern["tau2"] = pattern["t"]  # every class below 2-sep sits inside the W cone
    return pattern


def npt_side_information(rho: DensityMatrix) -> dict[str, bool]:
    """NPT flags of the three two-qubit reductions ("12", "13", "23").

    True means the reduction has a negative partial transpose, which is
    a sound certificate of its entanglement and rules out every subset
    whose members have that reduction separable.
    """
    if rho.dims != (2, 2, 2):
        raise ValueError("NPT side information is defined for three qubits")
    flags = {}
    for pair in ((1, 2), (1, 3), (2, 3)):
        omega = partial_trace(rho, pair)
        flags[f"{pair[0]}{pair[1]}"] = not is_ppt(omega)
    return flags


def _npt_exclusions(npt: dict[str, bool]) -> set[str]:
    """Subsets excluded by entangled reductions.

    An entangled pair {x, y} rules out full separability, both splits
    that isolate x or y, and the pair-class of the third subsystem
    (whose members all have separable rho_xy).
    """
    excluded = set()
    for key, entangled in npt.items():
        if not entangled:
            continue
        x, y = int(key[0]), int(key[1])
        (z,) = {1, 2, 3} - {x, y}
        excluded |= {"y", f"s{x}", f"s{y}", f"g{z}"}
    return excluded


@dataclass(frozen=True)
class MixedClassVerdict:
    flags: dict  # function key -> ZERO | EXCLUDED | POSITIVE_UNKNOWN
    resolved: str  # class name or "AMBIGUOUS"
    candidates: tuple
    npt: dict
    roof_values: dict
    seed: int

    def to_dict(self) -> dict:
        return {
            "flags": dict(self.flags),
            "resolved": self.resolved,
            "candidates": list(self.candidates),
            "npt": dict(self.npt),
            "roof_values": dict(self.roof_values),
            "seed": self.seed,
        }


def _fts_objectives() -> dict[str, PureStateFunction]:
    return {
        "y": PureStateFunction(tq.y_values, tq.y_wirtinger, "y"),
        "s1": PureStateFunction(lambda p: tq.s_values(p, 1), lambda p: tq.s_wirtinger(p, 1), "s1"),
        "s2": PureStateFunction(lambda p: tq.s_values(p, 2), lambda p: tq.s_wirtinger(p, 2), "s2"),
        "s3": PureStateFunction(lambda p: tq.s_values(p, 3), lambda p: tq.s_wirtinger(p, 3), "s3"),
        "g1": PureStateFunction(lambda p: tq.g_values(p, 1), lambda p: tq.g_wirtinger(p, 1), "g1"),
        "g2": PureStateFunction(lambda p: tq.g_values(p, 2), lambda p: tq.g_wirtinger(p, 2), "g2"),
        "g3": PureStateFunction(lambda p: tq.g_values(p, 3), lambda p: tq.g_wirtinger(p, 3), "g3"),
        "t": PureStateFunction(tq.t_values, tq.t_wirtinger, "t"),
        "tau2": PureStateFunction(tq.tau_sq_values, tq.tau_sq_wirtinger, "tau2"),
    }


def _subset_labels() -> dict[str, frozenset]:
    bot, single, pair, twosep, _ = _tripartite_atoms()
    return {
        "y": bot,
        "s1": single[1], "s2": single[2], "s3": single[3],
        "g1": pair[1], "g2": pair[2], "g3": pair[3],
        "t": twosep,
    }


def _mult_objectives(dims, entropy: EntropySpec) -> dict[str, PureStateFunction]:
    objs = {}
    for key, label in _subset_labels().items():
        values, wirt = label_objective(dims, label, entropy)
        objs[key] = PureStateFunction(values, wirt, key)
    return objs


def classify_mixed_3q(rho: DensityMatrix, functions: str | None = None,
                      threshold: float = ROOF_THRESHOLD, restarts: int = 32,
                      seed: int = 0, jobs: int = 1, max_iters: int = 250,
                      entropy: EntropySpec = DEFAULT_ENTROPY) -> MixedClassVerdict:
    """Assign a partial-separability class to a tripartite mixed state.

    ``functions`` selects the pure-state function set whose roofs are
    tested: "fts" (degree-limited covariant set, three qubits only) or
    "mult" (entropy products, any tripartite dims).  Default: fts for
    (2,2,2), mult otherwise.  For non-qubit dims the W/GHZ split does
    not apply and the tau2 level is omitted.
    """
    if rho.n != 3:
        raise ValueError("mixed classification needs exactly three subsystems")
    qubits = rho.dims == (2, 2, 2)
    if functions is None:
        functions = "fts" if qubits else "mult"
    if functions not in ("fts", "mult"):
        raise ValueError("functions must be 'fts' or 'mult'")
    if functions == "fts" and not qubits:
        raise ValueError("the fts function set exists only for qubits")

    keys = list(FUNCTION_KEYS) if qubits else [k for k in FUNCTION_KEYS if k != "tau2"]
    objectives = _fts_objectives() if functions == "fts" else _mult_objectives(rho.dims, entropy)
    if not qubits:
        objectives.pop("tau2", None)

    npt = npt_side_information(rho) if qubits else {}
    flags = {k: None for k in keys}
    for key in _npt_exclusions(npt):
        if key in flags:
            flags[key] = EXCLUDED
            for below in _BELOW[key]:
                if below in flags:
                    flags[below] = EXCLUDED

    roof_values = {}
    spec = SpectralDecomposition.of(rho)
    if spec.rank == 1:
        # unique decomposition: the roof equals the pure value, so positive
        # entries are certified too and the class resolves exactly
        psi = spec.eigenvectors[:, 0]
        for key in keys:
            value = float(objectives[key].values(psi[None, :])[0])
            roof_values[key] = value
            certain = ZERO if value <= threshold else EXCLUDED
            if flags[key] == EXCLUDED and certain == ZERO:
                raise ClassificationError(
                    f"subset {key} is both NPT-excluded and certified ZERO")
            flags[key] = certain
    else:
        for key in keys:
            if flags[key] is not None:
                continue
            result = convex_roof(rho, objectives[key], restarts=restarts, seed=seed,
                                 tol=threshold, max_iters=max_iters, jobs=jobs)
            roof_values[key] = result.value
            if result.value <= threshold:
                flags[key] = ZERO
                for upper in _ABOVE[key]:
                    if upper in flags and flags[upper] is None:
                        flags[upper] = ZERO
            else:
                flags[key] = UNKNOWN

    for key in keys:
        if flags[key] is None:
            flags[key] = UNKNOWN
        if flags[key] == ZERO:
            for upper in _ABOVE[key]:
                if upper in flags and flags[upper] == EXCLUDED:
                    raise ClassificationError(
                        f"hierarchy violation: {key} certified ZERO but {upper} excluded")

    rows = []
    for cls in enumerate_ps_classes(3, pss_extension=qubits):
        pattern = class_function_pattern(cls)
        rows.append((tripartite_class_name(cls), pattern))

    viable = []
    for name, pattern in rows:
        ok = True
        for key in keys:
            if flags[key] == ZERO and not pattern[key]:
                ok = False
            if flags[key] == EXCLUDED and pattern[key]:
                ok = False
        if ok:
            viable.append(name)
    if not viable:
        raise ClassificationError(f"no class row is consistent with flags {flags}")
    resolved = viable[0] if len(viable) == 1 else "AMBIGUOUS"
    return MixedClassVerdict(
        flags=flags,
        resolved=resolved,
        candidates=tuple(viable),
        npt=npt,
        roof_values=roof_values,
        seed=seed,
    )
