"""Evidence-space view of opinions.

A non-dogmatic opinion is equivalent to a Dirichlet (k = 2: Beta) density
over the domain's probability simplex, parameterized by per-state evidence
counts r, the base rate a, and a prior weight W:

    r[i]      = W * belief[i] / uncertainty
    belief[i] = r[i] / (W + sum(r)),   uncertainty = W / (W + sum(r))
    alpha[i]  = r[i] + base_rate[i] * W
    expected_probability[i] = alpha[i] / (W + sum(r))

The mapping is a bijection pinned down by requiring the opinion's projected
distribution to coincide with the density's expected distribution.  Fusion
operators are defined on this side of the mapping (see ``sldyn.fusion``).

Dogmatic opinions correspond to infinite evidence; ``to_evidence`` refuses
them instead of manufacturing infinities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .opinion import ADDITIVITY_TOL, Opinion, _check_base_rate

#: Prior weight used when none is given.  With a uniform binary base rate it
#: makes the vacuous opinion correspond to Beta(1, 1), the uniform prior.
DEFAULT_PRIOR_WEIGHT = 2.0


class DogmaticOpinionError(ValueError):
    """Raised when an operation requires finite evidence but got u = 0."""


@dataclass(frozen=True, slots=True)
class EvidenceOpinion:
    """Evidence counts plus base rate and prior weight.

    The Dirichlet strength vector alpha = evidence + base_rate * prior_weight
    is derived on demand rather than stored.
    """

    evidence: tuple[float, ...]
    base_rate: tuple[float, ...]
    prior_weight: float = DEFAULT_PRIOR_WEIGHT

    def __post_init__(self) -> None:
        evidence = tuple(float(x) for x in self.evidence)
        base_rate = tuple(float(x) for x in self.base_rate)
        w = float(self.prior_weight)
        object.__setattr__(self, "evidence", evidence)
        object.__setattr__(self, "base_rate", base_rate)
        object.__setattr__(self, "prior_weight", w)

        if len(evidence) < 2:
            raise ValueError(f"evidence needs a domain of size >= 2, got {len(evidence)}")
        if len(base_rate) != len(evidence):
            raise ValueError(
                f"evidence has {len(evidence)} states but base_rate has {len(base_rate)}"
            )
        for i, r in enumerate(evidence):
            if not (math.isfinite(r) and r >= 0.0):
                raise ValueError(f"evidence[{i}] must be finite and >= 0: {r!r}")
        if not (math.isfinite(w) and w > 0.0):
            raise ValueError(f"prior_weight must be finite and > 0: {w!r}")
        _check_base_rate(base_rate)

    @property
    def k(self) -> int:
        return len(self.evidence)

    @property
    def alpha(self) -> tuple[float, ...]:
        w = self.prior_weight
        return tuple(r + a * w for r, a in zip(self.evidence, self.base_rate))


def to_evidence(op: Opinion, prior_weight: float = DEFAULT_PRIOR_WEIGHT) -> EvidenceOpinion:
    """Map a non-dogmatic opinion to its evidence representation.

    Only exactly-zero uncertainty is refused (that is the infinite-evidence
    branch of the mapping); arbitrarily small positive uncertainty maps to
    large but finite evidence.
    """
    if op.uncertainty <= 0.0:
        raise DogmaticOpinionError(
            "dogmatic opinion has infinite evidence and cannot be mapped"
        )
    u = op.uncertainty
    w = float(prior_weight)
    evidence = tuple(w * b / u for b in op.belief)
    return EvidenceOpinion(evidence, op.base_rate, w)


def from_evidence(ev: EvidenceOpinion) -> Opinion:
    """Map evidence counts back to a (necessarily non-dogmatic) opinion."""
    w = ev.prior_weight
    denom = w + sum(ev.evidence)
    belief = tuple(r / denom for r in ev.evidence)
    return Opinion(belief, w / denom, ev.base_rate)


def expected_probability(ev: EvidenceOpinion) -> tuple[float, ...]:
    """Expected distribution of the Dirichlet: alpha[i] / (W + sum(r)).

    Coincides with ``projected(from_evidence(ev))``.
    """
    denom = ev.prior_weight + sum(ev.evidence)
    return tuple(a / denom for a in ev.alpha)


def dirichlet_density(ev: EvidenceOpinion, p: tuple[float, ...]) -> float:
    """Dirichlet (multivariate Beta) density at the distribution ``p``.

    Evaluates Gamma(sum(alpha)) / prod(Gamma(alpha[i])) * prod(p[i]^(alpha[i]-1))
    with alpha = evidence + base_rate * prior_weight, through log-gamma to
    stay finite for large evidence counts.  ``p`` must be a distribution
    over the same domain, with p[i] > 0 wherever alpha[i] < 1.
    """
    p = tuple(float(x) for x in p)
    if len(p) != ev.k:
        raise ValueError(f"p has {len(p)} states, expected {ev.k}")
    total = 0.0
    for i, x in enumerate(p):
        if not (math.isfinite(x) and 0.0 <= x <= 1.0):
            raise ValueError(f"p[{i}] out of [0, 1]: {x!r}")
        total += x
    if abs(total - 1.0) > ADDITIVITY_TOL:
        raise ValueError(f"p must sum to 1, got {total!r}")

    alpha = ev.alpha
    log_density = math.lgamma(sum(alpha)) - sum(math.lgamma(a) for a in alpha)
    for i, (a, x) in enumerate(zip(alpha, p)):
        if x == 0.0:
            if a < 1.0:
                raise ValueError(
                    f"p[{i}] = 0 not allowed where alpha[{i}] = {a!r} < 1"
                )
            if a > 1.0:
                return 0.0
            # a == 1: the factor p^0 is 1, contributes nothing.
        else:
            log_density += (a - 1.0) * math.log(x)
    return math.exp(log_density)


__all__ = [
    "DEFAULT_PRIOR_WEIGHT",
    "DogmaticOpinionError",
    "EvidenceOpinion",
    "to_evidence",
    "from_evidence",
    "expected_probability",
    "dirichlet_density",
]
