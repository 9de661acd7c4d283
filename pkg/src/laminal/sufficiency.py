"""Minimal sufficiency: the coarsest lossless reduction of a model.

Two sample points are equivalent when their probability columns are
proportional across all parameter values; the minimal sufficient
partition collects these classes.  Columns are compared after dividing by
their own (positive) sum, which avoids singling out a reference theta row
and gives the same grouping wherever a reference row exists.

The evidence function ``ev_ms`` reduces an inference base to the
pushforward model on those classes plus the observed class.  Equivalence
of two inference bases under the sufficiency relation is decided by
searching for a block relabeling that matches the pushforward models and
the observed blocks exactly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import ThetaSpaceMismatch
from .model import FiniteModel, InferenceBase, block_probabilities
from .partitions import Partition


def column_signature(model: FiniteModel, j: int) -> tuple[Fraction, ...]:
    """Column ``j`` normalized by its sum; equal signatures = proportional."""
    col = model.column(j)
    total = sum(col)
    return tuple(v / total for v in col)


def mss_partition(model: FiniteModel) -> Partition:
    """Partition of sample indices into proportional-column classes."""
    return Partition.from_assignment(
        [column_signature(model, j) for j in range(model.n_samples)]
    )


def model_of_statistic(model: FiniteModel, p: Partition) -> FiniteModel:
    """Pushforward model whose sample points are the blocks of ``p``."""
    rows = block_probabilities(model, p)
    labels = tuple(
        "{" + ",".join(model.sample_labels[e] for e in b) + "}" for b in p.blocks
    )
    return FiniteModel(model.theta_labels, labels, rows, f"{model.name}_T")


@dataclass(frozen=True)
class Relabeling:
    """A bijection between block-index sets, ``mapping[src] = dst``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError("relabeling must be a bijection of block indices")

    def __call__(self, j: int) -> int:
        return self.mapping[j]

    def inverse(self) -> "Relabeling":
        inv = [0] * len(self.mapping)
        for src, dst in enumerate(self.mapping):
            inv[dst] = src
        return Relabeling(tuple(inv))

    def compose(self, other: "Relabeling") -> "Relabeling":
        """The relabeling j -> self(other(j))."""
        return Relabeling(tuple(self.mapping[k] for k in other.mapping))

    @property
    def is_identity(self) -> bool:
        return all(d == s for s, d in enumerate(self.mapping))


@dataclass(frozen=True)
class EvidenceBase:
    """Output of an evidence function.

    ``space`` lists the minimal-sufficient blocks that remain in play, each
    as a tuple of original sample indices; ``model`` is the derived model
    over exactly those blocks (conditional on the observed contour when
    ``conditioning_block`` is present).  ``observed_block`` indexes into
    ``space``; ``conditioning_block`` is the union of original indices of
    the conditioning contour.
    """

    space: tuple[tuple[int, ...], ...]
    model: FiniteModel
    observed_block: int
    conditioning_block: frozenset[int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "space", tuple(map(tuple, self.space)))
        if not 0 <= self.observed_block < len(self.space):
            raise ValueError("observed block outside the evidence space")
        if len(self.space) != self.model.n_samples:
            raise ValueError("evidence model does not match its space")
        if self.conditioning_block is not None:
            if not set(self.space[self.observed_block]) <= self.conditioning_block:
                raise ValueError("observed block escapes the conditioning block")

    def as_inference_base(self) -> InferenceBase:
        return InferenceBase(self.model, self.observed_block)


def ev_ms(ib: InferenceBase) -> EvidenceBase:
    """Reduce an inference base to its minimal sufficient model and value."""
    t = mss_partition(ib.model)
    return EvidenceBase(
        space=t.blocks,
        model=model_of_statistic(ib.model, t),
        observed_block=t.block_of(ib.observed),
    )


def _require_same_thetas(ib1: InferenceBase, ib2: InferenceBase) -> None:
    if ib1.model.theta_labels != ib2.model.theta_labels:
        raise ThetaSpaceMismatch(
            f"parameter labels differ: {ib1.model.theta_labels} vs {ib2.model.theta_labels}"
        )


def _match_groups(
    vecs1: list[tuple[Fraction, ...]],
    idx1: list[int],
    vecs2: list[tuple[Fraction, ...]],
    idx2: list[int],
) -> list[tuple[int, int]] | None:
    """Pair indices with equal vectors, ascending within groups, or None."""
    if Counter(vecs1) != Counter(vecs2):
        return None
    queues: dict[tuple[Fraction, ...], list[int]] = {}
    for v, i in zip(vecs1, idx1):
        queues.setdefault(v, []).append(i)
    pairs = []
    for v, j in zip(vecs2, idx2):
        pairs.append((j, queues[v].pop(0)))
    return pairs


def s_equivalent(ib1: InferenceBase, ib2: InferenceBase) -> Relabeling | None:
    """Relabeling witnessing sufficiency equivalence, or None.

    The two minimal sufficient pushforward models must agree exactly under
    a block bijection that also sends the second observed block to the
    first.  The canonical witness matches the observed blocks first, then
    pairs equal probability vectors in ascending index order.
    """
    _require_same_thetas(ib1, ib2)
    e1, e2 = ev_ms(ib1), ev_ms(ib2)
    k = len(e1.space)
    if len(e2.space) != k:
        return None
    vec1 = [e1.model.column(j) for j in range(k)]
    vec2 = [e2.model.column(j) for j in range(k)]
    o1, o2 = e1.observed_block, e2.observed_block
    if vec1[o1] != vec2[o2]:
        return None
    rest1 = [j for j in range(k) if j != o1]
    rest2 = [j for j in range(k) if j != o2]
    pairs = _match_groups(
        [vec1[j] for j in rest1], rest1, [vec2[j] for j in rest2], rest2
    )
    if pairs is None:
        return None
    mapping = [0] * k
    mapping[o2] = o1
    for src, dst in pairs:
        mapping[src] = dst
    return Relabeling(tuple(mapping))
