"""Set partitions of {1..n} and the refinement partial order.

A partition groups the subsystem indices 1..n into disjoint nonempty
blocks.  Partitions are kept in a canonical form (each block sorted
ascending, blocks sorted by their smallest element) so that equal
partitions compare equal and render identically, e.g. ``1|23``.

Refinement is the usual order: ``beta <= alpha`` when every block of
``beta`` is contained in some block of ``alpha``.  The finest partition
``1|2|...|n`` is the bottom element, the single-block partition the top.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True, order=True)
class Partition:
    """A set partition of {1..n} in canonical block form."""

    blocks: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        seen = set()
        for block in self.blocks:
            if not block:
                raise ValueError("partition blocks must be nonempty")
            if list(block) != sorted(block):
                raise ValueError("partition blocks must be sorted ascending")
            seen.update(block)
        if len(seen) != sum(len(b) for b in self.blocks):
            raise ValueError("partition blocks must be disjoint")
        if seen != set(range(1, self.n + 1)):
            raise ValueError(f"partition must cover exactly {{1..{self.n}}}")
        if list(self.blocks) != sorted(self.blocks, key=lambda b: b[0]):
            raise ValueError("partition blocks must be sorted by smallest element")

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def refines(self, other: "Partition") -> bool:
        """True when ``self`` <= ``other`` in refinement order."""
        if self.n != other.n:
            raise ValueError("cannot compare partitions of different ground sets")
        membership = {}
        for i, block in enumerate(other.blocks):
            for x in block:
                membership[x] = i
        return all(len({membership[x] for x in block}) == 1 for block in self.blocks)

    def join_coarser_equal(self, other: "Partition") -> bool:
        return other.refines(self)

    def render(self) -> str:
        return "|".join("".join(str(x) for x in block) for block in self.blocks)

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Partition":
        """Parse a rendering like ``"1|23"`` back into a partition.

        Single-digit subsystem labels only, which covers the supported
        range (n <= 8).
        """
        if not text or not all(c.isdigit() or c == "|" for c in text):
            raise ValueError(f"malformed partition string: {text!r}")
        raw = [tuple(int(c) for c in part) for part in text.split("|")]
        if any(not part for part in raw):
            raise ValueError(f"malformed partition string: {text!r}")
        cover = {x for part in raw for x in part}
        size = n if n is not None else max(cover)
        return canonicalize(raw, size)


def canonicalize(blocks, n: int) -> Partition:
    """Build a canonical :class:`Partition` from any iterable of blocks."""
    ordered = tuple(sorted(tuple(sorted(block)) for block in blocks))
    return Partition(ordered, n)


def bottom(n: int) -> Partition:
    """The finest partition 1|2|...|n."""
    return Partition(tuple((i,) for i in range(1, n + 1)), n)


def top(n: int) -> Partition:
    """The single-block (trivial) partition."""
    return Partition((tuple(range(1, n + 1)),), n)


@lru_cache(maxsize=None)
def all_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of {1..n}, deduplicated and deterministically ordered.

    Supported for 1 <= n <= 8 (Bell numbers up to 4140).  The ordering is
    the natural lexicographic order on canonical block tuples, which is
    used as the fixed partition order everywhere downstream.
    """
    if not 1 <= n <= 8:
        raise ValueError("partition enumeration supports 1 <= n <= 8")

    results = []

    def extend(element, blocks):
        if element > n:
            results.append(tuple(tuple(b) for b in blocks))
            return
        for block in blocks:
            block.append(element)
            extend(element + 1, blocks)
            block.pop()
        blocks.append([element])
        extend(element + 1, blocks)
        blocks.pop()

    extend(1, [])
    partitions = sorted(Partition(blocks, n) for blocks in results)
    return tuple(partitions)


def proper_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions except the trivial single-block one."""
    return tuple(p for p in all_partitions(n) if p.num_blocks > 1)


def common_refinement(a: Partition, b: Partition) -> Partition:
    """The coarsest partition refining both arguments (lattice meet)."""
    if a.n != b.n:
        raise ValueError("cannot combine partitions of different ground sets")
    blocks = []
    for x, y in itertools.product(a.blocks, b.blocks):
        inter = tuple(sorted(set(x) & set(y)))
        if inter:
            blocks.append(inter)
    return canonicalize(blocks, a.n)
