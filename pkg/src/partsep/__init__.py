"""Partial-separability classification toolkit for tripartite quantum states.

The package is organised bottom-up:

- :mod:`partsep.partitions` — set partitions of the subsystems and their
  refinement order;
- :mod:`partsep.labels` — partial-separability labels (antichains of
  bipartition-like splits), the proper-label poset, and the class
  enumeration built from its up-sets;
- :mod:`partsep.states` — state vectors, density matrices, partial
  trace/transpose, entropies, serialization;
- :mod:`partsep.threequbit` — the polynomial covariants of three qubits
  and the scalar indicators built from them, plus closed-form
  cross-checks (canonical form, two-qubit concurrence);
- :mod:`partsep.indicators` — entropy-based indicator functions for
  arbitrary finite dimensions;
- :mod:`partsep.roof` — convex/concave roof extension by decomposition
  optimisation, with certificate semantics;
- :mod:`partsep.classify` — pure and mixed classifiers;
- :mod:`partsep.corpus` — named reference states with re-derivable
  verdicts;
- :mod:`partsep.report` — CSV/figure dashboard;
- :mod:`partsep.cli` — the ``partsep`` command.
"""

from .classify import (
    ClassificationError,
    MixedClassVerdict,
    PureClassVerdict,
    classify_mixed_3q,
    classify_pure_3q,
    classify_pure_general,
    npt_side_information,
)
from .corpus import CorpusEntry, corpus, run_corpus
from .indicators import EntropySpec, f_alpha, f_label, m_alpha, m_label
from .labels import (
    ClassLabel,
    enumerate_proper_labels,
    enumerate_ps_classes,
    label_leq,
    lattice_json,
    render_label,
    tripartite_class_name,
)
from .partitions import Partition, all_partitions, bottom, top
from .roof import (
    Decomposition,
    PureStateFunction,
    RoofResult,
    concave_roof,
    convex_roof,
    membership_certificate,
)
from .states import (
    DensityMatrix,
    StateVector,
    density_from_json,
    density_to_json,
    partial_trace,
    partial_transpose,
    state_from_json,
    state_to_json,
    von_neumann_entropy,
)
from .threequbit import (
    CanonicalParams,
    fts_covariants,
    indicator_vector,
    invariants_from_j,
    j_invariants,
    schmidt_canonical_state,
    sudbery_invariants,
    three_tangle,
    wootters_concurrence,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalParams",
    "ClassLabel",
    "ClassificationError",
    "CorpusEntry",
    "Decomposition",
    "DensityMatrix",
    "EntropySpec",
    "MixedClassVerdict",
    "Partition",
    "PureClassVerdict",
    "PureStateFunction",
    "RoofResult",
    "StateVector",
    "all_partitions",
    "bottom",
    "classify_mixed_3q",
    "classify_pure_3q",
    "classify_pure_general",
    "concave_roof",
    "convex_roof",
    "corpus",
    "density_from_json",
    "density_to_json",
    "enumerate_proper_labels",
    "enumerate_ps_classes",
    "f_alpha",
    "f_label",
    "fts_covariants",
    "indicator_vector",
    "invariants_from_j",
    "j_invariants",
    "label_leq",
    "lattice_json",
    "m_alpha",
    "m_label",
    "membership_certificate",
    "npt_side_information",
    "partial_trace",
    "partial_transpose",
    "render_label",
    "run_corpus",
    "schmidt_canonical_state",
    "state_from_json",
    "state_to_json",
    "sudbery_invariants",
    "three_tangle",
    "top",
    "tripartite_class_name",
    "von_neumann_entropy",
    "wootters_concurrence",
]
