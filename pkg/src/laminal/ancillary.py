"""Ancillary structure of a finite model.

An ancillary statistic is a partition whose block probabilities do not
depend on the parameter.  This module enumerates all of them, finds the
maximal ones (no ancillary strictly refines them), the minimal ones
(coarsenings of every maximal), and their maximum, the laminal ancillary.

Stability is the property that makes an ancillary safe to condition on:
reweighting the marginal distribution of any other ancillary must leave it
ancillary.  The quantifier over all weight vectors reduces, by linearity,
to point masses, i.e. to checking ancillarity in each conditional model
given a block of the other statistic; that reduction is the load-bearing
lemma here.  Stability is computed both this definitional way and through
the structural characterization (coarsening of every maximal ancillary),
and the two routes are cross-checked on every call, so the theory the
package relies on is re-verified continuously rather than trusted.

All functions are pure; enumeration results are memoized per model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    InternalCheckError,
    NotAncillary,
    SizeCapExceeded,
    ZeroProbabilityEvent,
)
from .model import (
    FiniteModel,
    ancillary_distribution,
    condition_on_event,
    event_support,
    mixture_model,
)
from .partitions import (
    DEFAULT_ENUMERATION_CAP,
    Partition,
    enumerate_partitions,
    is_coarsening,
    join,
)

#: Bound on the sample-space size for the 2^n ancillary-event scan.
EVENT_SCAN_CAP = 20

# Four-block reweighting exercised by the example3 report; tried after the
# point masses in the witness search so reported witnesses stay reproducible.
_DEMO_REWEIGHT = (
    Fraction(7, 100),
    Fraction(13, 100),
    Fraction(27, 100),
    Fraction(53, 100),
)


def is_ancillary(model: FiniteModel, p: Partition) -> bool:
    """True when every block of ``p`` has the same probability under all theta."""
    return ancillary_distribution(model, p) is not None


@lru_cache(maxsize=256)
def _ancillaries_cached(
    model: FiniteModel, within: Partition | None, cap: int
) -> tuple[Partition, ...]:
    return tuple(
        p
        for p in enumerate_partitions(model.n_samples, within, cap)
        if is_ancillary(model, p)
    )


def ancillaries(
    model: FiniteModel,
    within: Partition | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Partition, ...]:
    """All ancillary partitions, canonically sorted.

    With ``within`` (typically the minimal sufficient partition) only
    coarsenings of it are considered, i.e. only statistics that are
    functions of it.  The trivial one-block partition is always included.
    """
    return tuple(sorted(_ancillaries_cached(model, within, cap)))


@lru_cache(maxsize=256)
def _maximal_cached(
    model: FiniteModel, within: Partition | None, cap: int
) -> tuple[Partition, ...]:
    anc = _ancillaries_cached(model, within, cap)
    return tuple(
        sorted(
            p
            for p in anc
            if not any(q != p and is_coarsening(p, q) for q in anc)
        )
    )


def maximal_ancillaries(
    model: FiniteModel,
    within: Partition | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Partition, ...]:
    """Ancillaries that no other ancillary strictly refines."""
    return _maximal_cached(model, within, cap)


def minimal_ancillaries(
    model: FiniteModel,
    within: Partition | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Partition, ...]:
    """Ancillaries that are coarsenings of every maximal ancillary."""
    maxs = _maximal_cached(model, within, cap)
    return tuple(
        sorted(
            p
            for p in _ancillaries_cached(model, within, cap)
            if all(is_coarsening(p, w) for w in maxs)
        )
    )


def laminal(
    model: FiniteModel,
    within: Partition | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Partition:
    """The finest common coarsening of all maximal ancillaries.

    This is the maximum of the minimal ancillaries; both facts are
    re-checked on every call.  With a unique maximal ancillary the join is
    that maximal itself.
    """
    maxs = _maximal_cached(model, within, cap)
    lam = join(maxs)
    mins = minimal_ancillaries(model, within, cap)
    if not is_ancillary(model, lam):
        raise InternalCheckError("join of maximal ancillaries is not ancillary")
    if lam not in mins:
        raise InternalCheckError("laminal is not among the minimal ancillaries")
    if not all(is_coarsening(p, lam) for p in mins):
        raise InternalCheckError("a minimal ancillary does not coarsen the laminal")
    return lam


@lru_cache(maxsize=8192)
def _conditional_ancillary(model: FiniteModel, event: tuple, p: Partition) -> bool:
    # Ancillarity of the trace of p in the model conditioned on event.
    # Blocks of an ancillary always have positive mass in a valid model, so
    # conditioning is defined whenever event is such a block.  The same
    # (event, statistic) pairs recur across the stable/strong sweeps, hence
    # the memoization.
    kept = event_support(model, event)
    return is_ancillary(condition_on_event(model, event), p.restrict(kept))


def _stability_routes(
    model: FiniteModel,
    u: Partition,
    within: Partition | None,
    cap: int,
) -> bool:
    # Definitional route: u stays ancillary in the conditional model given
    # each block of each ancillary (point masses suffice by linearity in the
    # weights).  Structural route: u coarsens every maximal ancillary.  The
    # two must agree; raising otherwise turns the theory into a self-check.
    structural = all(
        is_coarsening(u, w) for w in _maximal_cached(model, within, cap)
    )
    definitional = all(
        _conditional_ancillary(model, block, u)
        for v in _ancillaries_cached(model, within, cap)
        for block in v.blocks
    )
    if structural != definitional:
        raise InternalCheckError(
            "stability routes disagree: structural="
            f"{structural}, definitional={definitional} for {u!r}"
        )
    return structural


def is_stable(
    model: FiniteModel, u: Partition, cap: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """True when no reweighting of any other ancillary makes ``u`` informative.

    Computed by both the definitional route (ancillarity in every
    conditional model given a block of another ancillary) and the structural
    one (coarsening of every maximal ancillary); the call fails loudly if
    the two ever disagree.
    """
    if ancillary_distribution(model, u) is None:
        raise NotAncillary("stability is only defined for ancillary statistics")
    return _stability_routes(model, u, None, cap)


def is_strong(
    model: FiniteModel, u: Partition, cap: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """True when reweighting ``u`` never makes another ancillary informative.

    Checked by conditioning on each block of ``u`` and testing every other
    ancillary there; the result must coincide with ``is_stable``.
    """
    if ancillary_distribution(model, u) is None:
        raise NotAncillary("strength is only defined for ancillary statistics")
    strong = all(
        _conditional_ancillary(model, block, v)
        for block in u.blocks
        for v in _ancillaries_cached(model, None, cap)
    )
    stable = is_stable(model, u, cap)
    if strong != stable:
        raise InternalCheckError(f"strong/stable disagree for {u!r}")
    return strong


@dataclass(frozen=True)
class InstabilityWitness:
    """A concrete reweighting that makes ``unstable`` informative.

    Remixing ``via`` with ``weights`` gives block ``block`` of ``unstable``
    the two different probabilities in ``lr`` under the theta values in
    ``thetas``.
    """

    unstable: Partition
    via: Partition
    weights: tuple[Fraction, ...]
    block: int
    lr: tuple[Fraction, Fraction]
    thetas: tuple[int, int]

    def __post_init__(self):
        if self.lr[0] == self.lr[1]:
            raise ValueError("witness probabilities must differ")


def _witness_weight_family(n_blocks: int):
    for i in range(n_blocks):
        yield tuple(
            Fraction(1) if j == i else Fraction(0) for j in range(n_blocks)
        )
    if n_blocks == len(_DEMO_REWEIGHT):
        yield _DEMO_REWEIGHT


def instability_witness(
    model: FiniteModel,
    u: Partition,
    cap: int = DEFAULT_ENUMERATION_CAP,
    within: Partition | None = None,
) -> InstabilityWitness | None:
    """First reweighting (deterministic search order) that destabilizes ``u``.

    Candidates run through ancillaries in enumeration order, with point
    masses on each block first; point masses are complete (an unstable
    statistic always fails in some conditional model), so the search cannot
    miss.  Returns None when ``u`` is stable.  With ``within`` both the
    stability decision and the search stay inside that restricted lattice.
    """
    if ancillary_distribution(model, u) is None:
        raise NotAncillary("stability is only defined for ancillary statistics")
    if _stability_routes(model, u, within, cap):
        return None
    for v in _ancillaries_cached(model, within, cap):
        for w in _witness_weight_family(v.n_blocks):
            mix = mixture_model(model, v, w)
            kept = [
                j for j in range(model.n_samples) if w[v.block_of(j)] > 0
            ]
            pos = {e: i for i, e in enumerate(kept)}
            for b_idx, block in enumerate(u.blocks):
                trace = [pos[e] for e in block if e in pos]
                if not trace:
                    continue
                vals = [
                    mix.event_prob(t, trace) for t in range(mix.n_thetas)
                ]
                for t1 in range(len(vals)):
                    for t2 in range(t1 + 1, len(vals)):
                        if vals[t1] != vals[t2]:
                            return InstabilityWitness(
                                unstable=u,
                                via=v,
                                weights=w,
                                block=b_idx,
                                lr=(vals[t1], vals[t2]),
                                thetas=(t1, t2),
                            )
    raise InternalCheckError(f"{u!r} is unstable but no witness was found")


def ancillary_events(
    model: FiniteModel, cap: int = EVENT_SCAN_CAP
) -> tuple[frozenset[int], ...]:
    """All subsets of the sample space with parameter-free probability.

    Scans all 2^n subsets (Gray-code order internally, canonical order in
    the output), so ``n`` is capped.
    """
    n, m = model.n_samples, model.n_thetas
    if n > cap:
        raise SizeCapExceeded(f"2^{n} event scan exceeds the cap of 2^{cap}")
    rows = model.probs
    sums = [Fraction(0)] * m
    current = 0
    found = [frozenset()]
    for k in range(1, 1 << n):
        bit = (k & -k).bit_length() - 1
        current ^= 1 << bit
        if current >> bit & 1:
            for t in range(m):
                sums[t] += rows[t][bit]
        else:
            for t in range(m):
                sums[t] -= rows[t][bit]
        if all(s == sums[0] for s in sums[1:]):
            found.append(
                frozenset(j for j in range(n) if current >> j & 1)
            )
    found.sort(key=lambda e: (len(e), sorted(e)))
    return tuple(found)


def algebra_generated_by(p: Partition) -> tuple[frozenset[int], ...]:
    """All unions of blocks of ``p`` (the algebra it generates)."""
    out = []
    k = p.n_blocks
    for mask in range(1 << k):
        e: set[int] = set()
        for i in range(k):
            if mask >> i & 1:
                e.update(p.blocks[i])
        out.append(frozenset(e))
    out.sort(key=lambda e: (len(e), sorted(e)))
    return tuple(out)


def gamma0(
    model: FiniteModel,
    cap: int = DEFAULT_ENUMERATION_CAP,
    event_cap: int = EVENT_SCAN_CAP,
) -> tuple[frozenset[int], ...]:
    """Ancillary events whose intersection with every ancillary event is ancillary.

    The result is re-checked to be an algebra (closed under complement and
    union) and to coincide with the algebra generated by the laminal
    ancillary's blocks.
    """
    events = ancillary_events(model, event_cap)
    eset = set(events)
    conforming = [e for e in events if all((e & f) in eset for f in events)]
    cset = set(conforming)
    full = frozenset(range(model.n_samples))
    for e in conforming:
        if (full - e) not in cset:
            raise InternalCheckError("conforming events not closed under complement")
    for e in conforming:
        for f in conforming:
            if (e | f) not in cset:
                raise InternalCheckError("conforming events not closed under union")
    if model.n_samples <= cap:
        lam = laminal(model, None, cap)
        if set(algebra_generated_by(lam)) != cset:
            raise InternalCheckError(
                "conforming-event algebra differs from the laminal algebra"
            )
    return tuple(conforming)


@dataclass(frozen=True)
class AncillaryClassification:
    """Complete ancillarity taxonomy of a model.

    All collections are canonically sorted tuples (deduplicated by
    construction), so reports built from them are deterministic.
    ``restricted_to_mss`` records whether enumeration was restricted to
    functions of the minimal sufficient partition.
    """

    ancillaries: tuple[Partition, ...]
    maximal: tuple[Partition, ...]
    minimal: tuple[Partition, ...]
    laminal: Partition
    stable: tuple[Partition, ...]
    gamma0: tuple[frozenset[int], ...]
    restricted_to_mss: bool


def classify(
    model: FiniteModel,
    within: Partition | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> AncillaryClassification:
    """Compute the full taxonomy, running every internal cross-check.

    With ``within`` the whole taxonomy describes the lattice of statistics
    that are functions of ``within`` (isomorphic to the ancillary lattice
    of the pushforward model on its blocks), so the stable/minimal identity
    holds in both modes and is verified on every call.  ``gamma0`` is always
    the event-level scan of the full sample space.
    """
    from .sufficiency import mss_partition

    anc = ancillaries(model, within, cap)
    maxs = maximal_ancillaries(model, within, cap)
    mins = minimal_ancillaries(model, within, cap)
    lam = laminal(model, within, cap)
    stable = tuple(
        sorted(u for u in anc if _stability_routes(model, u, within, cap))
    )
    g0 = gamma0(model, cap)
    if stable != mins:
        raise InternalCheckError("stable ancillaries differ from minimal ones")
    restricted = within is not None and within == mss_partition(model)
    return AncillaryClassification(
        ancillaries=anc,
        maximal=maxs,
        minimal=mins,
        laminal=lam,
        stable=stable,
        gamma0=g0,
        restricted_to_mss=restricted,
    )


def mle(model: FiniteModel, x: int) -> int:
    """Index of the maximum-likelihood theta at ``x``; ties go to the lowest index."""
    col = model.column(x)
    return max(range(model.n_thetas), key=lambda t: (col[t], -t))


def mle_ties(model: FiniteModel, x: int) -> tuple[int, ...]:
    """All theta indices attaining the maximum likelihood at ``x``."""
    col = model.column(x)
    best = max(col)
    return tuple(t for t in range(model.n_thetas) if col[t] == best)


def conditional_mle_table(
    model: FiniteModel, a: Partition, block: int
) -> tuple[tuple[Fraction, ...], ...]:
    """Sampling distribution of the MLE given a block of an ancillary.

    Entry (i, j) is the probability, under theta i and conditionally on the
    given block of ``a``, that the MLE equals theta j.  Rows sum to 1.
    """
    dist = ancillary_distribution(model, a)
    if dist is None:
        raise NotAncillary("conditional MLE table requires an ancillary statistic")
    if dist[block] == 0:
        raise ZeroProbabilityEvent("conditioning block has probability 0")
    points = a.blocks[block]
    m = model.n_thetas
    winners = [mle(model, j) for j in points]
    table = []
    for t in range(m):
        denom = model.event_prob(t, points)
        row = [Fraction(0)] * m
        for j, win in zip(points, winners):
            row[win] += model.probs[t][j]
        table.append(tuple(v / denom for v in row))
    return tuple(table)
