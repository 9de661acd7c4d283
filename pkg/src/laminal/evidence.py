"""Stable conditional evidence and relation audits.

``ev_sc`` reduces an inference base in two steps: first to the minimal
sufficient model (as ``ev_ms`` does), then by conditioning on the laminal
ancillary of that reduced model, i.e. on the unique maximal statistic
among the stable ancillaries that are functions of the minimal sufficient
one.  The output keeps only the observed laminal contour, where no
further reduction is possible; ``ev_sc_idempotent`` re-verifies this
fixed-point property by executing both composition orders.

``audit_relation`` checks reflexivity, symmetry and transitivity of the
sufficiency relation, the stable-conditionality relation, and (as a
counterexample target only) the classical conditioning relation that
relates a base to its conditionals given any maximal ancillary.  The
classical relation fails transitivity whenever two crossing maximal
ancillaries exist; the audit exhibits concrete witnesses.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

from .ancillary import laminal, maximal_ancillaries
from .errors import NotSCEquivalent, ThetaSpaceMismatch
from .model import InferenceBase, condition_on_event, event_support, format_model
from .partitions import DEFAULT_ENUMERATION_CAP
from .sufficiency import (
    EvidenceBase,
    Relabeling,
    _match_groups,
    _require_same_thetas,
    ev_ms,
    model_of_statistic,
    mss_partition,
    s_equivalent,
)


@lru_cache(maxsize=512)
def _sc_parts(ib: InferenceBase, cap: int):
    """Shared ingredients: mss, pushforward, laminal, observed contour."""
    t = mss_partition(ib.model)
    pushed = model_of_statistic(ib.model, t)
    lam = laminal(pushed, None, cap)
    t_obs = t.block_of(ib.observed)
    contour = lam.blocks[lam.block_of(t_obs)]
    conditional = condition_on_event(pushed, contour)
    return t, pushed, lam, t_obs, contour, conditional


def ev_sc(ib: InferenceBase, cap: int = DEFAULT_ENUMERATION_CAP) -> EvidenceBase:
    """Minimal sufficient reduction conditioned on its laminal ancillary.

    The evidence space is the observed laminal contour: the minimal
    sufficient blocks sharing the observed laminal value, carrying the
    conditional model given that value.
    """
    t, _, _, t_obs, contour, conditional = _sc_parts(ib, cap)
    space = tuple(t.blocks[i] for i in contour)
    covered = frozenset(e for i in contour for e in t.blocks[i])
    return EvidenceBase(
        space=space,
        model=conditional,
        observed_block=contour.index(t_obs),
        conditioning_block=covered,
    )


def sc_equivalent(
    ib1: InferenceBase, ib2: InferenceBase, cap: int = DEFAULT_ENUMERATION_CAP
) -> Relabeling | None:
    """Relabeling witnessing stable-conditionality equivalence, or None.

    Requires minimal sufficient spaces of equal size and a bijection whose
    restriction maps the second observed contour onto the first with
    exactly matching conditional probability vectors and matching observed
    blocks.  Off the contour the bijection is completed deterministically
    in ascending index order (the relation only constrains it on the
    contour).
    """
    _require_same_thetas(ib1, ib2)
    t1, _, _, o1, contour1, cond1 = _sc_parts(ib1, cap)
    t2, _, _, o2, contour2, cond2 = _sc_parts(ib2, cap)
    if t1.n_blocks != t2.n_blocks:
        return None
    if len(contour1) != len(contour2):
        return None
    vec1 = {t: cond1.column(i) for i, t in enumerate(contour1)}
    vec2 = {t: cond2.column(i) for i, t in enumerate(contour2)}
    if vec1[o1] != vec2[o2]:
        return None
    rest1 = [t for t in contour1 if t != o1]
    rest2 = [t for t in contour2 if t != o2]
    pairs = _match_groups(
        [vec1[t] for t in rest1], rest1, [vec2[t] for t in rest2], rest2
    )
    if pairs is None:
        return None
    mapping = [-1] * t2.n_blocks
    mapping[o2] = o1
    for src, dst in pairs:
        mapping[src] = dst
    off1 = [t for t in range(t1.n_blocks) if t not in set(contour1)]
    off2 = [t for t in range(t2.n_blocks) if t not in set(contour2)]
    for src, dst in zip(off2, off1):
        mapping[src] = dst
    return Relabeling(tuple(mapping))


def ev_sc_idempotent(ib: InferenceBase, cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """Check that the stable-conditional reduction is a fixed point.

    Materializes ``ev_sc(ib)``, then re-reduces it with ``ev_ms`` and
    re-reduces ``ev_ms(ib)`` with ``ev_sc``; all three evidence bases must
    agree up to the canonical block identification (same derived model
    matrix over the same parameter labels, same observed position).
    """

    def signature(eb: EvidenceBase):
        return (eb.model.theta_labels, eb.model.probs, eb.observed_block)

    direct = ev_sc(ib, cap)
    ms_after = ev_ms(direct.as_inference_base())
    sc_after = ev_sc(ev_ms(ib).as_inference_base(), cap)
    return signature(direct) == signature(ms_after) == signature(sc_after)


def conditional_bases_s_equivalent(
    ib1: InferenceBase, ib2: InferenceBase, cap: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """Sufficiency equivalence of the two conditioned evidence bases.

    Only defined for pairs already equivalent under stable conditionality.
    """
    if sc_equivalent(ib1, ib2, cap) is None:
        raise NotSCEquivalent("the pair is not equivalent under stable conditionality")
    e1, e2 = ev_sc(ib1, cap), ev_sc(ib2, cap)
    return s_equivalent(e1.as_inference_base(), e2.as_inference_base()) is not None


# ---------------------------------------------------------------------------
# Relation audits
# ---------------------------------------------------------------------------


def content_hash(ib: InferenceBase) -> str:
    """Short stable hash of the model content and observed value."""
    payload = format_model(ib.model) + f"observed {ib.observed_label}\n"
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def _base_signature(ib: InferenceBase):
    return (ib.model.theta_labels, ib.model.probs, ib.observed)


def maximal_conditionals(
    ib: InferenceBase, cap: int = DEFAULT_ENUMERATION_CAP
) -> tuple[InferenceBase, ...]:
    """The conditional bases given each maximal ancillary at the observed value."""
    out = []
    for a in maximal_ancillaries(ib.model, None, cap):
        block = a.blocks[a.block_of(ib.observed)]
        kept = event_support(ib.model, block)
        cond = condition_on_event(ib.model, block)
        out.append(InferenceBase(cond, kept.index(ib.observed)))
    return tuple(out)


@dataclass(frozen=True)
class RelationAuditReport:
    """Outcome of an exhaustive relation audit over a corpus.

    Failure entries are corpus indices: ``(i,)`` for reflexivity, ``(i, j)``
    for symmetry (related one way only), ``(i, j, k)`` for transitivity.
    ``containment_checks`` (stable-conditionality audits only) records
    ``((i, j), in_s, in_sc)`` for every unordered pair.
    """

    relation_name: str
    corpus_size: int
    reflexive_failures: tuple[tuple[int], ...]
    symmetric_failures: tuple[tuple[int, int], ...]
    transitive_failures: tuple[tuple[int, int, int], ...]
    containment_checks: tuple[tuple[tuple[int, int], bool, bool], ...] = ()

    @property
    def is_equivalence(self) -> bool:
        return not (
            self.reflexive_failures
            or self.symmetric_failures
            or self.transitive_failures
        )

    @property
    def containment_failures(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            pair for pair, in_s, in_sc in self.containment_checks if in_s and not in_sc
        )


def _s_related(ib1, ib2, cap) -> bool:
    # Bases over different parameter spaces are simply unrelated.
    try:
        return s_equivalent(ib1, ib2) is not None
    except ThetaSpaceMismatch:
        return False


def _sc_related(ib1, ib2, cap) -> bool:
    try:
        return sc_equivalent(ib1, ib2, cap) is not None
    except ThetaSpaceMismatch:
        return False


def audit_relation(
    corpus: list[InferenceBase],
    relation: str,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> RelationAuditReport:
    """Exhaustively audit reflexivity, symmetry and transitivity on a corpus.

    ``relation`` is ``"s"`` (sufficiency), ``"sc"`` (stable conditionality)
    or ``"c"`` (classical conditioning on any maximal ancillary; implemented
    as the reflexive-symmetric closure of the one-step conditioning relation,
    so its expected failure mode is transitivity).  For ``"sc"`` every pair
    is also checked for the sufficiency-implies-stable-conditionality
    containment.
    """
    k = len(corpus)
    if relation in ("s", "sc"):
        test = _s_related if relation == "s" else _sc_related
        related = {
            (i, j): test(corpus[i], corpus[j], cap)
            for i in range(k)
            for j in range(k)
        }
    elif relation == "c":
        sigs = [_base_signature(ib) for ib in corpus]
        conds = [
            {_base_signature(c) for c in maximal_conditionals(ib, cap)}
            for ib in corpus
        ]
        related = {
            (i, j): sigs[i] == sigs[j]
            or sigs[j] in conds[i]
            or sigs[i] in conds[j]
            for i in range(k)
            for j in range(k)
        }
    else:
        raise ValueError(f"unknown relation {relation!r}")

    reflexive = tuple((i,) for i in range(k) if not related[(i, i)])
    symmetric = tuple(
        (i, j)
        for i in range(k)
        for j in range(k)
        if i != j and related[(i, j)] and not related[(j, i)]
    )
    transitive = tuple(
        (i, j, l)
        for i in range(k)
        for j in range(k)
        for l in range(k)
        if len({i, j, l}) == 3
        and related[(i, j)]
        and related[(j, l)]
        and not related[(i, l)]
    )
    containment = ()
    if relation == "sc":
        containment = tuple(
            ((i, j), _s_related(corpus[i], corpus[j], cap), related[(i, j)])
            for i in range(k)
            for j in range(i + 1, k)
        )
    return RelationAuditReport(
        relation_name=relation,
        corpus_size=k,
        reflexive_failures=reflexive,
        symmetric_failures=symmetric,
        transitive_failures=transitive,
        containment_checks=containment,
    )
