"""Belief fusion operators, computed in evidence space.

Each operator maps the input opinions to evidence vectors, combines those,
and maps the result back:

* cumulative: sum the evidence.  Sources are independent, so more sources
  mean more evidence.  Associative, vacuous is neutral, not idempotent.
* averaging: arithmetic mean of the evidence.  More sources do not mean
  more evidence.  Idempotent, no neutral element.
* weighted: mean of the evidence weighted by each source's confidence
  c = 1 - uncertainty = sum(belief), so vacuous sources are ignored.
  Idempotent, vacuous is neutral.

Averaging and weighted fusion are not associative; their n-ary forms are
defined as one-shot means over all inputs, which keeps them permutation
invariant.  All inputs must be non-dogmatic and share the same base rate.
"""

from __future__ import annotations

from collections.abc import Sequence

from .evidence import DEFAULT_PRIOR_WEIGHT, EvidenceOpinion, from_evidence, to_evidence
from .opinion import Opinion, vacuous

#: Operator tokens accepted by configs and the CLI.
CUMULATIVE = "cumulative"
AVERAGING = "averaging"
WEIGHTED = "weighted"


def _checked_evidence(
    ops: Sequence[Opinion], prior_weight: float
) -> list[EvidenceOpinion]:
    if not ops:
        raise ValueError("fusion needs at least one opinion")
    first = ops[0]
    for i, op in enumerate(ops[1:], start=1):
        if op.k != first.k:
            raise ValueError(
                f"fusion inputs disagree on domain size: {first.k} vs {op.k} at index {i}"
            )
        if op.base_rate != first.base_rate:
            raise ValueError(
                f"fusion inputs disagree on base rate at index {i}: "
                f"{first.base_rate} vs {op.base_rate}"
            )
    return [to_evidence(op, prior_weight) for op in ops]


def cumulative_fuse(
    ops: Sequence[Opinion], prior_weight: float = DEFAULT_PRIOR_WEIGHT
) -> Opinion:
    """Fuse by summing evidence: r = sum_i r_i."""
    evs = _checked_evidence(ops, prior_weight)
    if len(evs) == 1:
        return ops[0]
    combined = tuple(
        sum(ev.evidence[i] for ev in evs) for i in range(evs[0].k)
    )
    return from_evidence(EvidenceOpinion(combined, ops[0].base_rate, prior_weight))


def averaging_fuse(
    ops: Sequence[Opinion], prior_weight: float = DEFAULT_PRIOR_WEIGHT
) -> Opinion:
    """Fuse by averaging evidence: r = mean_i r_i."""
    evs = _checked_evidence(ops, prior_weight)
    if len(evs) == 1:
        return ops[0]
    n = len(evs)
    combined = tuple(
        sum(ev.evidence[i] for ev in evs) / n for i in range(evs[0].k)
    )
    return from_evidence(EvidenceOpinion(combined, ops[0].base_rate, prior_weight))


def weighted_fuse(
    ops: Sequence[Opinion], prior_weight: float = DEFAULT_PRIOR_WEIGHT
) -> Opinion:
    """Fuse by confidence-weighted evidence mean: r = sum_i c_i r_i / sum_i c_i.

    The confidence of a source is its committed mass c = 1 - uncertainty.
    When every input is vacuous the weights vanish and the result is the
    vacuous opinion, which keeps vacuous a true neutral element.
    """
    evs = _checked_evidence(ops, prior_weight)
    if len(evs) == 1:
        return ops[0]
    confidences = [1.0 - op.uncertainty for op in ops]
    weight = sum(confidences)
    if weight <= 0.0:
        return vacuous(ops[0].base_rate)
    combined = tuple(
        sum(c * ev.evidence[i] for c, ev in zip(confidences, evs)) / weight
        for i in range(evs[0].k)
    )
    return from_evidence(EvidenceOpinion(combined, ops[0].base_rate, prior_weight))


FUSION_OPERATORS = {
    CUMULATIVE: cumulative_fuse,
    AVERAGING: averaging_fuse,
    WEIGHTED: weighted_fuse,
}
