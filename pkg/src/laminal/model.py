"""Finite discrete statistical models with exact rational probabilities.

A model is a labelled matrix: one row of probabilities per parameter
value, one column per sample point, every entry a ``fractions.Fraction``.
Ancillarity is an equality predicate on sums of entries, so no floating
point is allowed anywhere on the analysis path; construction rejects
floats outright.

Derived models (conditionals, mixtures) are fully validated again, which
keeps the core invariants (rows sum to 1, no dead sample point) true
throughout an analysis.  All values are immutable and all operations are
pure functions, so everything is safe to share across threads.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DeadSamplePoint,
    DuplicateLabel,
    EpsilonOutOfRange,
    GroundSetMismatch,
    InvalidWeights,
    ModelError,
    ModelFormatError,
    NegativeProbability,
    NotAncillary,
    RowSumError,
    UnknownSampleLabel,
    WeightArityMismatch,
    ZeroProbabilityEvent,
)
from .partitions import Partition

_ONE = Fraction(1)
_RATIONAL_TOKEN = re.compile(r"^[+-]?\d+(/\d+)?$")


def as_rational(value: Fraction | int | str) -> Fraction:
    """Convert to an exact rational; floats are rejected, never coerced."""
    if isinstance(value, float):
        raise ModelError(f"floating-point value {value!r} is not exact")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelFormatError(f"not a rational: {value!r}") from exc


@dataclass(frozen=True)
class FiniteModel:
    """A finite discrete model: labelled rows of exact probabilities.

    ``name`` and ``dropped`` (labels removed by conditioning or zero-weight
    mixing) are provenance metadata and do not take part in equality.
    """

    theta_labels: tuple[str, ...]
    sample_labels: tuple[str, ...]
    probs: tuple[tuple[Fraction, ...], ...]
    name: str = field(default="model", compare=False)
    dropped: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        thetas = tuple(self.theta_labels)
        samples = tuple(self.sample_labels)
        rows = tuple(tuple(as_rational(v) for v in row) for row in self.probs)
        object.__setattr__(self, "theta_labels", thetas)
        object.__setattr__(self, "sample_labels", samples)
        object.__setattr__(self, "probs", rows)
        object.__setattr__(self, "dropped", tuple(self.dropped))
        if not thetas or not samples:
            raise ModelError("need at least one parameter and one sample point")
        for axis, labels in (("theta", thetas), ("sample", samples)):
            if len(set(labels)) != len(labels):
                raise DuplicateLabel(f"duplicate {axis} label")
        if len(rows) != len(thetas) or any(len(r) != len(samples) for r in rows):
            raise ModelError("probability matrix shape does not match labels")
        for lab, row in zip(thetas, rows):
            for v in row:
                if v < 0:
                    raise NegativeProbability(f"negative probability under {lab}")
            if sum(row) != _ONE:
                raise RowSumError(f"row {lab} sums to {sum(row)}, not 1")
        for j, lab in enumerate(samples):
            if all(row[j] == 0 for row in rows):
                raise DeadSamplePoint(f"sample point {lab} has probability 0 everywhere")

    @property
    def n_thetas(self) -> int:
        return len(self.theta_labels)

    @property
    def n_samples(self) -> int:
        return len(self.sample_labels)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.probs)

    def event_prob(self, theta: int, event: Iterable[int]) -> Fraction:
        row = self.probs[theta]
        return sum((row[j] for j in event), Fraction(0))

    def sample_index(self, label: str) -> int:
        try:
            return self.sample_labels.index(label)
        except ValueError:
            raise UnknownSampleLabel(f"unknown sample label {label!r}") from None


def build_model(
    theta_labels: Sequence[str],
    sample_labels: Sequence[str],
    probs: Sequence[Sequence[Fraction | int | str]],
    name: str = "model",
) -> FiniteModel:
    """Validate and build a model from any exact-rational matrix input."""
    return FiniteModel(tuple(theta_labels), tuple(sample_labels), tuple(map(tuple, probs)), name)


@dataclass(frozen=True)
class InferenceBase:
    """A model together with the observed sample index."""

    model: FiniteModel
    observed: int

    def __post_init__(self):
        if not 0 <= self.observed < self.model.n_samples:
            raise UnknownSampleLabel(f"observed index {self.observed} out of range")

    @property
    def observed_label(self) -> str:
        return self.model.sample_labels[self.observed]


def example1_model(
    eps: Fraction | int | str,
    allow_degenerate: bool = False,
    name: str = "example1",
) -> FiniteModel:
    """Built-in 2x7 model whose first four points carry an eps perturbation.

    Valid for 0 < eps < 1/64 (the smallest entry stays positive).  eps = 0
    collapses several likelihood-ratio classes and is only allowed behind
    ``allow_degenerate``, as a test case for that collapse.
    """
    e = as_rational(eps)
    if e == 0 and allow_degenerate:
        pass
    elif not 0 < e < Fraction(1, 64):
        raise EpsilonOutOfRange(f"eps must lie strictly between 0 and 1/64, got {e}")
    f = Fraction
    row1 = (f(1, 8) + e, f(1, 8) - e, f(1, 8) + 2 * e, f(1, 8) - 2 * e,
            f(1, 14), f(2, 14), f(4, 14))
    row2 = (f(1, 16) - e, f(3, 16) + e, f(3, 16) + 4 * e, f(1, 16) - 4 * e,
            f(2, 14), f(1, 14), f(4, 14))
    return FiniteModel(
        ("theta1", "theta2"),
        tuple(str(i) for i in range(1, 8)),
        (row1, row2),
        name,
    )


def example2_model(name: str = "example2") -> FiniteModel:
    """Built-in 2x4 model with two crossing maximal ancillaries."""
    f = Fraction
    return FiniteModel(
        ("theta1", "theta2"),
        ("1", "2", "3", "4"),
        ((f(1, 6), f(1, 6), f(2, 6), f(2, 6)),
         (f(1, 12), f(3, 12), f(5, 12), f(3, 12))),
        name,
    )


def block_probabilities(model: FiniteModel, p: Partition) -> tuple[tuple[Fraction, ...], ...]:
    """Per-theta probabilities of the blocks of ``p`` (an m x k matrix)."""
    if p.n != model.n_samples:
        raise GroundSetMismatch(
            f"partition over {p.n} points does not match model with {model.n_samples}"
        )
    return tuple(
        tuple(model.event_prob(t, b) for b in p.blocks)
        for t in range(model.n_thetas)
    )


def ancillary_distribution(model: FiniteModel, p: Partition) -> tuple[Fraction, ...] | None:
    """Block distribution of ``p`` when it is parameter-free, else None."""
    rows = block_probabilities(model, p)
    first = rows[0]
    if any(row != first for row in rows[1:]):
        return None
    return first


def event_support(model: FiniteModel, event: Iterable[int]) -> tuple[int, ...]:
    """Sample indices of ``event`` that are alive under at least one theta."""
    return tuple(
        j for j in sorted(set(event))
        if any(row[j] > 0 for row in model.probs)
    )


def condition_on_event(model: FiniteModel, event: Iterable[int]) -> FiniteModel:
    """Restrict to ``event`` and renormalize each row by its own event mass.

    Every theta must give the event positive probability.  Points of the
    event that are dead in the conditional model are removed and recorded
    in the result's ``dropped`` metadata.
    """
    event = sorted(set(event))
    if any(j < 0 or j >= model.n_samples for j in event):
        raise UnknownSampleLabel("event contains an out-of-range sample index")
    masses = [model.event_prob(t, event) for t in range(model.n_thetas)]
    for lab, mass in zip(model.theta_labels, masses):
        if mass == 0:
            raise ZeroProbabilityEvent(f"event has probability 0 under {lab}")
    kept = event_support(model, event)
    dropped = tuple(model.sample_labels[j] for j in event if j not in set(kept))
    rows = tuple(
        tuple(model.probs[t][j] / masses[t] for j in kept)
        for t in range(model.n_thetas)
    )
    return FiniteModel(
        model.theta_labels,
        tuple(model.sample_labels[j] for j in kept),
        rows,
        f"{model.name}_cond",
        dropped,
    )


def validate_weights(
    weights: Sequence[Fraction | int | str], n_blocks: int
) -> tuple[Fraction, ...]:
    """Check a reweighting vector: one entry per block, >= 0, summing to 1."""
    w = tuple(as_rational(v) for v in weights)
    if len(w) != n_blocks:
        raise WeightArityMismatch(f"{len(w)} weights for {n_blocks} blocks")
    if any(v < 0 for v in w):
        raise InvalidWeights("weights must be nonnegative")
    if sum(w) != _ONE:
        raise InvalidWeights(f"weights sum to {sum(w)}, not 1")
    return w


def mixture_model(
    model: FiniteModel,
    u: Partition,
    weights: Sequence[Fraction | int | str],
) -> FiniteModel:
    """Remix the model with new marginal weights on an ancillary statistic.

    Each point's probability is scaled by (new weight / current weight) of
    its block, which leaves the conditional model given each block intact.
    Blocks given weight 0 disappear; their labels are recorded in
    ``dropped``.
    """
    dist = ancillary_distribution(model, u)
    if dist is None:
        raise NotAncillary("mixture weights can only replace an ancillary's distribution")
    w = validate_weights(weights, u.n_blocks)
    # Blocks of an ancillary are never dead in a valid model, so dist > 0.
    factor = [wi / qi for wi, qi in zip(w, dist)]
    kept = [j for j in range(model.n_samples) if w[u.block_of(j)] > 0]
    dropped = tuple(model.sample_labels[j] for j in range(model.n_samples) if j not in set(kept))
    rows = tuple(
        tuple(model.probs[t][j] * factor[u.block_of(j)] for j in kept)
        for t in range(model.n_thetas)
    )
    return FiniteModel(
        model.theta_labels,
        tuple(model.sample_labels[j] for j in kept),
        rows,
        f"{model.name}_mix",
        dropped,
    )


# ---------------------------------------------------------------------------
# Text format
#
#   model <name>
#   thetas <label> ...
#   samples <label> ...
#   <theta-label> <a/b or integer> ...        (one line per theta, any order)
#
# '#' starts a comment; blank lines are ignored.  Tokens must be exact
# rationals; decimals are rejected.
# ---------------------------------------------------------------------------


def format_model(model: FiniteModel) -> str:
    lines = [f"model {model.name}"]
    lines.append("thetas " + " ".join(model.theta_labels))
    lines.append("samples " + " ".join(model.sample_labels))
    for lab, row in zip(model.theta_labels, model.probs):
        lines.append(lab + " " + " ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> FiniteModel:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if len(lines) < 4:
        raise ModelFormatError("model text needs a header and at least one row")
    if not lines[0].startswith("model"):
        raise ModelFormatError("first line must be 'model <name>'")
    name = lines[0][len("model"):].strip() or "model"
    head_t = lines[1].split()
    head_s = lines[2].split()
    if head_t[:1] != ["thetas"] or len(head_t) < 2:
        raise ModelFormatError("second line must be 'thetas <label> ...'")
    if head_s[:1] != ["samples"] or len(head_s) < 2:
        raise ModelFormatError("third line must be 'samples <label> ...'")
    thetas, samples = head_t[1:], head_s[1:]
    rows: dict[str, list[Fraction]] = {}
    for line in lines[3:]:
        toks = line.split()
        lab = toks[0]
        if lab not in thetas:
            raise ModelFormatError(f"unknown theta label in row: {lab!r}")
        if lab in rows:
            raise ModelFormatError(f"duplicate row for theta {lab!r}")
        if len(toks) - 1 != len(samples):
            raise ModelFormatError(
                f"row {lab!r} has {len(toks) - 1} entries, expected {len(samples)}"
            )
        row = []
        for tok in toks[1:]:
            if not _RATIONAL_TOKEN.match(tok):
                raise ModelFormatError(f"not an exact rational token: {tok!r}")
            row.append(as_rational(tok))
        rows[lab] = row
    missing = [lab for lab in thetas if lab not in rows]
    if missing:
        raise ModelFormatError(f"missing probability row for theta {missing[0]!r}")
    return build_model(thetas, samples, [rows[lab] for lab in thetas], name)
