"""Multinomial opinions over a finite domain.

An opinion splits one unit of mass between per-state belief and a residual
uncertainty mass, and carries a strictly positive prior distribution (the
base rate) that absorbs the uncertainty when the opinion is projected onto
probabilities:

    projected(i) = belief[i] + base_rate[i] * uncertainty

A dogmatic opinion has no uncertainty at all; a vacuous opinion has nothing
but uncertainty and projects onto its base rate.  Background: Josang,
"Subjective Logic", Springer 2016, ch. 2-3.

All values here are immutable and all operations are pure functions, so
they are safe to share and call from any number of threads.
"""

from __future__ import annotations

from dataclasses import dataclass

#: Tolerance for additivity / normalization checks on constructed values.
ADDITIVITY_TOL = 1e-9

#: Uncertainty at or below this threshold counts as dogmatic.
DOGMATIC_EPS = 1e-12

# Float noise this far outside [0, 1] is snapped back by internal transforms.
_SNAP = 1e-9


def _snap01(x: float) -> float:
    if -_SNAP <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + _SNAP:
        return 1.0
    return x


@dataclass(frozen=True, slots=True)
class DomainSpec:
    """Ordered set of k >= 2 distinct state labels."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        if len(self.labels) < 2:
            raise ValueError(f"domain needs at least 2 states, got {len(self.labels)}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"domain labels must be distinct: {self.labels!r}")

    @property
    def k(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, slots=True)
class Opinion:
    """An opinion (belief, uncertainty, base_rate) over a k-state domain.

    Invariants, enforced on construction:

    * every component is finite and in [0, 1],
    * sum(belief) + uncertainty == 1 within ``ADDITIVITY_TOL``,
    * base_rate is a strictly positive distribution summing to 1.

    The strict positivity of the base rate keeps uncertainty maximization
    and the evidence mapping free of divisions by zero.
    """

    belief: tuple[float, ...]
    uncertainty: float
    base_rate: tuple[float, ...]

    def __post_init__(self) -> None:
        belief = tuple(float(x) for x in self.belief)
        base_rate = tuple(float(x) for x in self.base_rate)
        u = float(self.uncertainty)
        object.__setattr__(self, "belief", belief)
        object.__setattr__(self, "base_rate", base_rate)
        object.__setattr__(self, "uncertainty", u)

        k = len(belief)
        if k < 2:
            raise ValueError(f"opinion needs a domain of size >= 2, got {k}")
        if len(base_rate) != k:
            raise ValueError(
                f"belief has {k} states but base_rate has {len(base_rate)}"
            )
        for i, b in enumerate(belief):
            if not _in_unit(b):
                raise ValueError(f"belief[{i}] out of [0, 1]: {b!r}")
        if not _in_unit(u):
            raise ValueError(f"uncertainty out of [0, 1]: {u!r}")
        total = u + sum(belief)
        if abs(total - 1.0) > ADDITIVITY_TOL:
            raise ValueError(
                f"belief mass and uncertainty must sum to 1, got {total!r}"
            )
        _check_base_rate(base_rate)

    @property
    def k(self) -> int:
        return len(self.belief)

    def to_dict(self) -> dict:
        """JSON-ready form: {"belief": [...], "uncertainty": u, "base_rate": [...]}."""
        return {
            "belief": list(self.belief),
            "uncertainty": self.uncertainty,
            "base_rate": list(self.base_rate),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Opinion":
        if not isinstance(obj, dict):
            raise ValueError(f"expected an opinion object, got {type(obj).__name__}")
        required = {"belief", "uncertainty", "base_rate"}
        unknown = set(obj) - required
        if unknown:
            raise ValueError(f"unknown opinion keys: {sorted(unknown)}")
        missing = required - set(obj)
        if missing:
            raise ValueError(f"missing opinion keys: {sorted(missing)}")
        return cls(tuple(obj["belief"]), obj["uncertainty"], tuple(obj["base_rate"]))


def _in_unit(x: float) -> bool:
    return isinstance(x, float) and 0.0 <= x <= 1.0  # rejects nan and inf


def _check_base_rate(base_rate: tuple[float, ...]) -> None:
    for i, a in enumerate(base_rate):
        if not _in_unit(a) or a <= 0.0:
            raise ValueError(f"base_rate[{i}] must be in (0, 1]: {a!r}")
    total = sum(base_rate)
    if abs(total - 1.0) > ADDITIVITY_TOL:
        raise ValueError(f"base_rate must sum to 1, got {total!r}")


def vacuous(base_rate: tuple[float, ...]) -> Opinion:
    """The fully uncertain opinion: no belief mass, uncertainty 1."""
    base_rate = tuple(float(x) for x in base_rate)
    return Opinion((0.0,) * len(base_rate), 1.0, base_rate)


def projected(op: Opinion) -> tuple[float, ...]:
    """Projected probability distribution: belief[i] + base_rate[i] * uncertainty."""
    u = op.uncertainty
    return tuple(b + a * u for b, a in zip(op.belief, op.base_rate))


def is_dogmatic(op: Opinion) -> bool:
    """True when the opinion carries (numerically) no uncertainty mass."""
    return op.uncertainty <= DOGMATIC_EPS


def uncertainty_maximize(op: Opinion) -> Opinion:
    """The projection-preserving opinion with maximal uncertainty.

    Raises the uncertainty until some belief component hits zero (or the
    uncertainty hits one), while keeping the projected distribution and the
    base rate fixed:

        u' = min(1, min_i projected(i) / base_rate(i))
        belief'[i] = projected(i) - base_rate[i] * u'

    Idempotent, and never decreases uncertainty.
    """
    probs = projected(op)
    u = min(p / a for p, a in zip(probs, op.base_rate))
    u = _snap01(min(1.0, u))
    if u <= op.uncertainty:  # already maximal; avoid round-trip noise
        return op
    belief = tuple(_snap01(p - a * u) for p, a in zip(probs, op.base_rate))
    return Opinion(belief, u, op.base_rate)


def from_projection(probs: tuple[float, ...], base_rate: tuple[float, ...]) -> Opinion:
    """Uncertainty-maximized opinion whose projection equals ``probs``."""
    probs = tuple(float(x) for x in probs)
    total = sum(probs)
    if abs(total - 1.0) > ADDITIVITY_TOL:
        raise ValueError(f"projection must sum to 1, got {total!r}")
    return uncertainty_maximize(Opinion(probs, 0.0, tuple(base_rate)))
