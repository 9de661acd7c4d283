"""Set partitions of {0, ..., n-1} as canonical value objects.

A statistic on a finite sample space carries the same information as the
partition of sample indices into its preimage blocks, and two statistics
that are 1-1 functions of each other induce the same partition.  All
statistics in this package are therefore represented as partitions over
indices; label text only appears in reports.

Blocks are stored sorted by their minimum element with elements sorted
inside each block, so equality and hashing are structural and sets of
partitions deduplicate automatically.  Everything here is a pure function
over immutable values.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Sequence

from .errors import EmptyInput, GroundSetMismatch, SizeCapExceeded, UnknownSampleLabel

#: Default bound on the ground-set size (or block count when refining a base
#: partition) for exhaustive enumeration.  Bell(13) is about 2.7e7.
DEFAULT_ENUMERATION_CAP = 13


class Partition:
    """An ordered set partition of {0, ..., n-1} with structural equality."""

    __slots__ = ("n", "blocks", "_block_of")

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        norm = []
        for b in blocks:
            t = tuple(sorted(b))
            if not t:
                raise ValueError("partition blocks must be nonempty")
            norm.append(t)
        norm.sort(key=lambda b: b[0])
        elems = sorted(e for b in norm for e in b)
        if n is None:
            n = len(elems)
        if n < 1 or elems != list(range(n)):
            raise ValueError(f"blocks must partition range(0, {n}) exactly")
        block_of = [0] * n
        for i, b in enumerate(norm):
            for e in b:
                block_of[e] = i
        self.n = n
        self.blocks = tuple(norm)
        self._block_of = tuple(block_of)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(((i,) for i in range(n)), n)

    @classmethod
    def one_block(cls, n: int) -> "Partition":
        return cls((range(n),), n)

    @classmethod
    def from_assignment(cls, keys: Sequence[Hashable]) -> "Partition":
        """Group indices by key value; blocks ordered by first occurrence."""
        groups: dict[Hashable, list[int]] = {}
        for i, k in enumerate(keys):
            groups.setdefault(k, []).append(i)
        return cls(groups.values(), len(keys))

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, element: int) -> int:
        """Index of the block containing ``element``."""
        return self._block_of[element]

    def restrict(self, kept: Sequence[int]) -> "Partition":
        """Trace of the partition on ``kept``, reindexed to 0..len(kept)-1.

        ``kept`` must be strictly increasing original indices; empty traces
        of blocks disappear.
        """
        pos = {e: i for i, e in enumerate(kept)}
        blocks = []
        for b in self.blocks:
            t = [pos[e] for e in b if e in pos]
            if t:
                blocks.append(t)
        return Partition(blocks, len(kept))

    def sort_key(self) -> tuple:
        return (self.n, self.n_blocks, self.blocks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Partition)
            and self.n == other.n
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.n, self.blocks))

    def __lt__(self, other: "Partition") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Partition({format_partition(self)!r})"


def is_coarsening(p: Partition, q: Partition) -> bool:
    """True when ``p`` is a coarsening of ``q`` (p = h(q) for some h).

    Equivalently every block of ``q`` lies inside a single block of ``p``;
    the relation is reflexive.
    """
    if p.n != q.n:
        raise GroundSetMismatch(f"ground sets differ: {p.n} vs {q.n}")
    return all(len({p.block_of(e) for e in b}) == 1 for b in q.blocks)


def join(parts: Sequence[Partition]) -> Partition:
    """Finest common coarsening, via components of the same-block relation."""
    if not parts:
        raise EmptyInput("join of no partitions")
    n = parts[0].n
    if any(p.n != n for p in parts):
        raise GroundSetMismatch("join over mixed ground sets")
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in parts:
        for b in p.blocks:
            root = find(b[0])
            for e in b[1:]:
                parent[find(e)] = root
    return Partition.from_assignment([find(i) for i in range(n)])


def meet(p: Partition, q: Partition) -> Partition:
    """Coarsest common refinement (nonempty pairwise block intersections)."""
    if p.n != q.n:
        raise GroundSetMismatch(f"ground sets differ: {p.n} vs {q.n}")
    return Partition.from_assignment(
        [(p.block_of(i), q.block_of(i)) for i in range(p.n)]
    )


def coarsen(base: Partition, grouping: Partition) -> Partition:
    """Merge the blocks of ``base`` according to a partition of block indices."""
    if grouping.n != base.n_blocks:
        raise GroundSetMismatch("grouping must partition the base block indices")
    blocks = []
    for g in grouping.blocks:
        merged: list[int] = []
        for i in g:
            merged.extend(base.blocks[i])
        blocks.append(merged)
    return Partition(blocks, base.n)


def _growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    # Restricted growth strings a with a[0] = 0 and a[i] <= 1 + max(a[:i]),
    # in lexicographic order; each string encodes one set partition.
    a = [0] * n

    def rec(i: int, mx: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(a)
            return
        for v in range(mx + 2):
            a[i] = v
            yield from rec(i + 1, mx if v <= mx else v)

    return rec(1, 0)


def enumerate_partitions(
    n: int,
    coarser_than: Partition | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[Partition]:
    """Yield every partition of {0,...,n-1} exactly once, deterministically.

    The order is restricted-growth-string (lexicographic) order.  With
    ``coarser_than`` only coarsenings of that partition are produced, by
    enumerating partitions of its block set and expanding, so the effective
    size is its block count.  Raises SizeCapExceeded when the effective size
    exceeds ``cap``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if coarser_than is not None and coarser_than.n != n:
        raise GroundSetMismatch("coarser_than has a different ground set")
    size = n if coarser_than is None else coarser_than.n_blocks
    if size > cap:
        raise SizeCapExceeded(
            f"enumeration over {size} items exceeds the cap of {cap}"
        )

    def gen() -> Iterator[Partition]:
        if coarser_than is None:
            for s in _growth_strings(n):
                yield Partition.from_assignment(s)
        else:
            for s in _growth_strings(size):
                yield coarsen(coarser_than, Partition.from_assignment(s))

    return gen()


def format_partition(p: Partition, labels: Sequence[str] | None = None) -> str:
    """Render blocks as label groups: ``1,2,3,4|5,6|7``."""
    if labels is None:
        labels = [str(i) for i in range(p.n)]
    return "|".join(",".join(labels[e] for e in b) for b in p.blocks)


def parse_partition(text: str, labels: Sequence[str]) -> Partition:
    """Parse the ``a,b|c`` block syntax against a label list."""
    index = {lab: i for i, lab in enumerate(labels)}
    blocks = []
    for group in text.split("|"):
        block = []
        for tok in group.split(","):
            tok = tok.strip()
            if tok not in index:
                raise UnknownSampleLabel(f"unknown label {tok!r} in partition")
            block.append(index[tok])
        blocks.append(block)
    try:
        return Partition(blocks, len(labels))
    except ValueError as exc:
        raise UnknownSampleLabel(f"not a partition of the label set: {exc}") from exc
