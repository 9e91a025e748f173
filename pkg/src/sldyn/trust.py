"""Trust opinions and the trust-discount operator.

Trust between agents is dogmatic here: a single probability that the
source is reliable.  Discounting by trust t scales the source's belief
mass and moves the rest to uncertainty, leaving the base rate alone:

    belief'[i]   = t * belief[i]
    uncertainty' = 1 - t * (1 - uncertainty)

At t = 1 the opinion passes through unchanged; at t = 0 it collapses to
the vacuous opinion.  In evidence terms the discount removes evidence,
never adds it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .opinion import Opinion


@dataclass(frozen=True, slots=True)
class TrustOpinion:
    """Projected probability of a dogmatic trust opinion, in [0, 1]."""

    trust: float

    def __post_init__(self) -> None:
        t = float(self.trust)
        object.__setattr__(self, "trust", t)
        if not (0.0 <= t <= 1.0):
            raise ValueError(f"trust must be in [0, 1]: {t!r}")


def discount(t: TrustOpinion | float, op: Opinion) -> Opinion:
    """The opinion learned from a source trusted with probability t."""
    trust = t.trust if isinstance(t, TrustOpinion) else TrustOpinion(t).trust
    if trust == 1.0:
        # exact pass-through; the formula below would lose uncertainty
        # smaller than one ulp of 1 to cancellation
        return op
    belief = tuple(trust * b for b in op.belief)
    uncertainty = 1.0 - trust * (1.0 - op.uncertainty)
    return Opinion(belief, uncertainty, op.base_rate)
