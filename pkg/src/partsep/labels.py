"""Separability labels (antichains of partitions) and class labels.

A *label* is a nonempty set of partitions of {1..n}, read disjunctively:
a state carries the label when it is a mixture of pure states, each
separable under at least one member partition.  Labels are ordered by

    beta <= alpha  iff  every partition in beta refines some partition
                        in alpha,

and a label is *proper* when it is an antichain (no member refines
another member).  Every label reduces to a unique proper label with the
same meaning by dropping dominated members.

A *class label* splits the proper labels into an ``included`` and an
``excluded`` half and denotes the states carrying every included label
and none of the excluded ones.  Classes realised by actual states have
an up-closed included half; the enumeration below produces exactly
those, via the antichains of the proper-label poset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .partitions import Partition, all_partitions, top

Label = frozenset  # frozenset[Partition]


def make_label(partitions: Iterable[Partition]) -> Label:
    label = frozenset(partitions)
    if not label:
        raise ValueError("a label must contain at least one partition")
    sizes = {p.n for p in label}
    if len(sizes) != 1:
        raise ValueError("all partitions in a label must share one ground set")
    return label


def label_leq(beta: Label, alpha: Label) -> bool:
    """Order on labels: every member of ``beta`` refines some member of ``alpha``."""
    return all(any(b.refines(a) for a in alpha) for b in beta)


def is_proper(label: Label) -> bool:
    """True when the label is a nonempty antichain under refinement."""
    if not label:
        return False
    members = list(label)
    for i, b in enumerate(members):
        for a in members[i + 1:]:
            if b.refines(a) or a.refines(b):
                return False
    return True


def properize(label: Label) -> Label:
    """Drop members that refine another member, keeping the meaning intact."""
    label = make_label(label)
    kept = [p for p in label if not any(p != q and p.refines(q) for q in label)]
    return frozenset(kept)


def render_label(label: Label) -> str:
    return "{" + ",".join(str(p) for p in sorted(label)) + "}"


def parse_label(text: str, n: int | None = None) -> Label:
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"malformed label string: {text!r}")
    parts = [Partition.parse(tok, n) for tok in text[1:-1].split(",") if tok]
    return make_label(parts)


def _antichain_tuples(items, leq) -> Iterator[tuple]:
    """All nonempty antichains of ``items`` under ``leq``, as index-ordered tuples.

    Tuples are grown left to right: each appended element sits strictly
    later in the fixed total order than the previous one and is
    incomparable to everything already in the tuple, so every antichain
    appears exactly once, in lexicographic order of index tuples.
    """
    def extend(current, start):
        for i in range(start, len(items)):
            x = items[i]
            if all(not leq(x, y) and not leq(y, x) for y in current):
                grown = current + (x,)
                yield grown
                yield from extend(grown, i + 1)

    yield from extend((), 0)


@lru_cache(maxsize=None)
def enumerate_proper_labels(n: int) -> tuple[Label, ...]:
    """All proper labels over {1..n}, deterministically ordered (n <= 6).

    Proper labels are exactly the nonempty antichains of the partition
    lattice, enumerated by ordered tuple extension over the fixed
    partition order.
    """
    if not 1 <= n <= 6:
        raise ValueError("proper-label enumeration supports 1 <= n <= 6")
    parts = all_partitions(n)
    return tuple(frozenset(t) for t in _antichain_tuples(parts, lambda b, a: b.refines(a)))


def top_label(n: int) -> Label:
    """The maximal label: just the single-block partition."""
    return frozenset({top(n)})


@dataclass(frozen=True)
class ClassLabel:
    """A membership pattern over all proper labels of {1..n}.

    ``w_flag`` refines the three-qubit picture only: ``True``/``False``
    record membership of the W cone for the one class the extra level
    splits, ``None`` everywhere else.
    """

    n: int
    included: frozenset = field()  # frozenset[Label]
    excluded: frozenset = field()
    w_flag: bool | None = None

    def __post_init__(self):
        everything = set(enumerate_proper_labels(self.n))
        inc, exc = set(self.included), set(self.excluded)
        if inc & exc:
            raise ValueError("included and excluded labels overlap")
        if inc | exc != everything:
            raise ValueError("included and excluded must cover all proper labels")
        if top_label(self.n) not in inc:
            raise ValueError("the top label is carried by every state")

    def to_dict(self) -> dict:
        data = {
            "included": sorted(render_label(l) for l in self.included),
            "excluded": sorted(render_label(l) for l in self.excluded),
        }
        if self.w_flag is not None:
            data["w"] = self.w_flag
        return data


def class_empty_by_construction(cls: ClassLabel) -> bool:
    """True when some included label sits below some excluded one.

    Membership of a lower label forces membership of every label above
    it, so such a pattern cannot be realised by any state.
    """
    return any(
        label_leq(beta, alpha)
        for alpha in cls.excluded
        for beta in cls.included
    )


def enumerate_ps_classes(n: int, pss_extension: bool = False) -> Iterator[ClassLabel]:
    """All realisable class labels over {1..n}, lazily (n <= 4).

    Realisable classes correspond one-to-one to nonempty up-sets of the
    proper-label poset (the included half), generated here from their
    minimal antichains.  With ``pss_extension`` (three qubits only) the
    genuinely entangled class is split once more by the W cone, giving
    21 classes instead of 20.
    """
    if not 1 <= n <= 4:
        raise ValueError("class enumeration supports 1 <= n <= 4")
    if pss_extension and n != 3:
        raise ValueError("the W/GHZ split applies to three subsystems only")

    labels = enumerate_proper_labels(n)
    universe = frozenset(labels)

    for gens in _antichain_tuples(labels, label_leq):
        included = frozenset(
            l for l in labels if any(label_leq(g, l) for g in gens)
        )
        if pss_extension and included == frozenset({top_label(n)}):
            # Every class below the two-block level is inside the W cone;
            # only the top class straddles it.
            yield ClassLabel(n, included, universe - included, w_flag=True)
            yield ClassLabel(n, included, universe - included, w_flag=False)
        else:
            yield ClassLabel(n, included, universe - included)


def _tripartite_atoms(n: int = 3):
    """The nine proper labels of three subsystems, keyed by role."""
    parts = {str(p): p for p in all_partitions(3)}
    bot = frozenset({parts["1|2|3"]})
    # the bipartition isolating subsystem a, in canonical rendering
    split = {1: parts["1|23"], 2: parts["13|2"], 3: parts["12|3"]}
    single = {a: frozenset({split[a]}) for a in (1, 2, 3)}
    pair = {
        1: frozenset({split[2], split[3]}),
        2: frozenset({split[1], split[3]}),
        3: frozenset({split[1], split[2]}),
    }
    twosep = frozenset({split[1], split[2], split[3]})
    return bot, single, pair, twosep, top_label(3)


def tripartite_class_name(cls: ClassLabel) -> str:
    """Human name (C3, C2.8, ..., C2.2.a, C2.1, C1, CW, CGHZ) of a class."""
    if cls.n != 3:
        raise ValueError("named classes are defined for three subsystems")
    bot, single, pair, twosep, topl = _tripartite_atoms()
    exc = cls.excluded

    if cls.w_flag is not None:
        return "CW" if cls.w_flag else "CGHZ"
    if not exc:
        return "C3"
    if exc == {bot}:
        return "C2.8"
    for a in (1, 2, 3):
        b, c = sorted({1, 2, 3} - {a})
        if exc == {bot, single[a]}:
            return f"C2.7.{a}"
        if exc == {bot, single[b], single[c]}:
            return f"C2.6.{a}"
        if exc == {bot, single[b], single[c], pair[a]}:
            return f"C2.5.{a}"
        if exc == {bot, single[1], single[2], single[3], pair[a]}:
            return f"C2.3.{a}"
        if exc == frozenset({bot, single[1], single[2], single[3], pair[b], pair[c]}):
            return f"C2.2.{a}"
    if exc == {bot, single[1], single[2], single[3]}:
        return "C2.4"
    if cls.included == {twosep, topl}:
        return "C2.1"
    if cls.included == {topl}:
        return "C1"
    raise ValueError("class label does not match any realisable three-party class")


def lattice_json(n: int, pss_extension: bool = False) -> dict:
    """Nodes, covering edges, and classes of the proper-label poset as JSON data."""
    labels = enumerate_proper_labels(n)
    index = {l: i for i, l in enumerate(labels)}
    leq = [[label_leq(a, b) for b in labels] for a in labels]
    edges = []
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if i == j or not leq[i][j]:
                continue
            # covering edge: nothing strictly between a and b
            if not any(
                k not in (i, j) and leq[i][k] and leq[k][j] for k in range(len(labels))
            ):
                edges.append([i, j])
    classes = []
    if n <= 4:
        for cls in enumerate_ps_classes(n, pss_extension=pss_extension):
            entry = cls.to_dict()
            if n == 3:
                entry["name"] = tripartite_class_name(cls)
            entry["included"] = sorted(index[l] for l in cls.included)
            entry["excluded"] = sorted(index[l] for l in cls.excluded)
            classes.append(entry)
    return {
        "n": n,
        "nodes": [render_label(l) for l in labels],
        "edges": edges,
        "classes": classes,
    }
