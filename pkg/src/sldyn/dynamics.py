"""Synchronous opinion dynamics on a trusted agent network.

Every time step, each agent fuses its own opinion with the trust-discounted
opinions of all other agents, read from the same time slice:

    next(i) = fuse([own(i)] + [discount(trust[i][j], own(j)) for j != i])

Cumulative fusion folds (sums) the evidence; averaging and weighted fusion
take a one-shot n-ary mean.  With ``epistemic_mode`` on, every update is
followed by uncertainty maximization, which lets opposed evidence cancel.

A simulation run is deterministic and sequential.  States, traces and
reports are immutable values, so independent runs (parameter sweeps,
bisection probes) can safely execute concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .evidence import DEFAULT_PRIOR_WEIGHT, DogmaticOpinionError
from .fusion import FUSION_OPERATORS
from .opinion import Opinion, from_projection, projected, uncertainty_maximize
from .trust import TrustOpinion, discount

#: A converged limit within this distance of a degenerate distribution
#: counts as radicalized.  Cumulative fusion only approaches the extremes
#: asymptotically, so exact 0/1 never occurs at finite time.
RADICAL_TOL = 0.01

_UNIFORM2 = (0.5, 0.5)
_CLASS_TOL = 1e-9
_WEAK_SLACK = 1e-12


class BracketingError(RuntimeError):
    """Fixed-point bisection could not bracket a sign change."""


class ScenarioClass(enum.Enum):
    """Regimes of a two-agent pair under the update, by initial condition."""

    CONSENSUS = "Consensus"
    BALANCED_OPPOSITE = "BalancedOpposite"
    UNBALANCED_OPPOSITE = "UnbalancedOpposite"
    BOUNDARY = "Boundary"


@dataclass(frozen=True, slots=True)
class UpdateParams:
    """Knobs of the update function."""

    operator: str
    prior_weight: float = DEFAULT_PRIOR_WEIGHT
    epistemic_mode: bool = False

    def __post_init__(self) -> None:
        if self.operator not in FUSION_OPERATORS:
            raise ValueError(
                f"unknown fusion operator {self.operator!r}; "
                f"expected one of {sorted(FUSION_OPERATORS)}"
            )
        w = float(self.prior_weight)
        object.__setattr__(self, "prior_weight", w)
        if not (math.isfinite(w) and w > 0.0):
            raise ValueError(f"prior_weight must be finite and > 0: {w!r}")
        object.__setattr__(self, "epistemic_mode", bool(self.epistemic_mode))


@dataclass(frozen=True, slots=True)
class NetworkState:
    """Agents, their opinions, the (static) trust matrix, and the clock.

    ``trust[i][j]`` is how much agent i trusts agent j as a source.  The
    diagonal is never read: agents trust themselves completely.
    """

    agents: tuple[str, ...]
    opinions: tuple[Opinion, ...]
    trust: tuple[tuple[TrustOpinion, ...], ...]
    time: int = 0

    def __post_init__(self) -> None:
        agents = tuple(str(a) for a in self.agents)
        opinions = tuple(self.opinions)
        trust = tuple(
            tuple(t if isinstance(t, TrustOpinion) else TrustOpinion(t) for t in row)
            for row in self.trust
        )
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "opinions", opinions)
        object.__setattr__(self, "trust", trust)
        object.__setattr__(self, "time", int(self.time))

        n = len(agents)
        if n < 1:
            raise ValueError("network needs at least one agent")
        if len(set(agents)) != n:
            raise ValueError(f"agent identifiers must be distinct: {agents!r}")
        if len(opinions) != n:
            raise ValueError(f"{n} agents but {len(opinions)} opinions")
        if len(trust) != n or any(len(row) != n for row in trust):
            raise ValueError(f"trust matrix must be {n}x{n}")
        if self.time < 0:
            raise ValueError(f"time must be >= 0: {self.time}")

        first = opinions[0]
        for i, op in enumerate(opinions):
            if op.k != first.k:
                raise ValueError(
                    f"opinion of agent {agents[i]!r} has domain size {op.k}, "
                    f"expected {first.k}"
                )
            if op.base_rate != first.base_rate:
                raise ValueError(
                    f"opinion of agent {agents[i]!r} has a different base rate"
                )
            if op.uncertainty <= 0.0:
                raise DogmaticOpinionError(
                    f"agent {agents[i]!r} holds a dogmatic opinion; "
                    "the update is undefined for infinite evidence"
                )

    @property
    def n(self) -> int:
        return len(self.agents)


@dataclass(frozen=True, slots=True)
class TraceStep:
    """One synchronous time slice: every agent's opinion and projection."""

    time: int
    opinions: tuple[Opinion, ...]
    projections: tuple[tuple[float, ...], ...]


@dataclass(frozen=True, slots=True)
class Trace:
    """Per-step record of a simulation, starting at the initial state."""

    agents: tuple[str, ...]
    steps: tuple[TraceStep, ...]


@dataclass(frozen=True, slots=True)
class ConvergenceReport:
    converged: bool
    limit: tuple[tuple[float, ...], ...] | None
    steps_to_converge: int | None
    radicalized: bool


def _fuse_inputs(inputs: list[Opinion], params: UpdateParams) -> Opinion:
    fused = FUSION_OPERATORS[params.operator](inputs, params.prior_weight)
    if params.epistemic_mode:
        fused = uncertainty_maximize(fused)
    return fused


def step_two_agent(
    a: Opinion, b: Opinion, trust_ab: TrustOpinion, params: UpdateParams
) -> Opinion:
    """One update of agent A against peer B: fuse own with the learned opinion."""
    if a.uncertainty <= 0.0 or b.uncertainty <= 0.0:
        raise DogmaticOpinionError("update is undefined for dogmatic opinions")
    return _fuse_inputs([a, discount(trust_ab, b)], params)


def step_network(state: NetworkState, params: UpdateParams) -> NetworkState:
    """One synchronous step: every agent updates from the time-t opinions."""
    ops = state.opinions
    new_opinions = []
    for i in range(state.n):
        inputs = [ops[i]]
        row = state.trust[i]
        for j in range(state.n):
            if j != i:
                inputs.append(discount(row[j], ops[j]))
        new_opinions.append(_fuse_inputs(inputs, params))
    return NetworkState(state.agents, tuple(new_opinions), state.trust, state.time + 1)


def _snapshot(state: NetworkState) -> TraceStep:
    return TraceStep(
        state.time,
        state.opinions,
        tuple(projected(op) for op in state.opinions),
    )


def simulate(initial: NetworkState, params: UpdateParams, t_max: int) -> Trace:
    """Run ``t_max`` synchronous steps; the trace has ``t_max + 1`` slices."""
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0: {t_max}")
    state = initial
    steps = [_snapshot(state)]
    for _ in range(t_max):
        state = step_network(state, params)
        steps.append(_snapshot(state))
    return Trace(initial.agents, tuple(steps))


def _transition_moves(trace: Trace) -> list[float]:
    moves = []
    steps = trace.steps
    for prev, cur in zip(steps, steps[1:]):
        moves.append(
            max(
                abs(q - p)
                for prev_probs, cur_probs in zip(prev.projections, cur.projections)
                for p, q in zip(prev_probs, cur_probs)
            )
        )
    return moves


def detect_convergence(
    trace: Trace, eps: float = 1e-6, window: int = 10
) -> ConvergenceReport:
    """Judge convergence from the tail of a trace.

    The trace converged when every one of the final ``window`` transitions
    moved every agent's projected distribution by less than ``eps`` in the
    max norm.  The limit is the final slice; it is radicalized when every
    agent's limit sits within ``RADICAL_TOL`` of a degenerate distribution.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be > 0: {eps!r}")
    if window < 1:
        raise ValueError(f"window must be >= 1: {window}")
    if not trace.steps:
        raise ValueError("empty trace")

    moves = _transition_moves(trace)
    converged = all(m < eps for m in moves[-window:])
    if not converged:
        return ConvergenceReport(False, None, None, False)

    settled = len(moves)
    while settled > 0 and moves[settled - 1] < eps:
        settled -= 1
    limit = trace.steps[-1].projections
    radicalized = all(max(probs) >= 1.0 - RADICAL_TOL for probs in limit)
    return ConvergenceReport(True, limit, settled, radicalized)


def check_weak_convergence(trace: Trace) -> bool:
    """Whether no update ever overshoots the peer's previous position.

    For every consecutive pair of slices and both agents, the updated first
    state probability must lie between the agent's own previous value and
    the peer's previous value (in either order).  Two-agent traces only.
    """
    if len(trace.agents) != 2:
        raise ValueError(f"weak convergence is defined for 2 agents, got {len(trace.agents)}")
    steps = trace.steps
    for prev, cur in zip(steps, steps[1:]):
        for i, j in ((0, 1), (1, 0)):
            own_prev = prev.projections[i][0]
            own_next = cur.projections[i][0]
            peer_prev = prev.projections[j][0]
            up = own_prev - _WEAK_SLACK <= own_next <= peer_prev + _WEAK_SLACK
            down = own_prev + _WEAK_SLACK >= own_next >= peer_prev - _WEAK_SLACK
            if not (up or down):
                return False
    return True


def classify_pair(a: Opinion, b: Opinion, trust_ab: TrustOpinion) -> ScenarioClass:
    """Classify a two-agent initial condition on a binary domain.

    The comparison is between A's projected probability of the first state
    and the projected probability of the opinion A learns from B (B's
    opinion discounted by A's trust in B).
    """
    if a.k != 2 or b.k != 2:
        raise ValueError("classification is defined for binary domains")
    p_own = projected(a)[0]
    p_learned = projected(discount(trust_ab, b))[0]
    if abs(p_own - 0.5) <= _CLASS_TOL or abs(p_learned - 0.5) <= _CLASS_TOL:
        return ScenarioClass.BOUNDARY
    if (p_own - 0.5) * (p_learned - 0.5) > 0.0:
        return ScenarioClass.CONSENSUS
    if abs(p_own - (1.0 - p_learned)) <= _CLASS_TOL:
        return ScenarioClass.BALANCED_OPPOSITE
    return ScenarioClass.UNBALANCED_OPPOSITE


def _two_agent_state(p_a: float, p_b: float, trust: TrustOpinion) -> NetworkState:
    return NetworkState(
        ("A", "B"),
        (
            from_projection((p_a, 1.0 - p_a), _UNIFORM2),
            from_projection((p_b, 1.0 - p_b), _UNIFORM2),
        ),
        ((TrustOpinion(1.0), trust), (trust, TrustOpinion(1.0))),
    )


def _peer_probability_at_horizon(
    p_a: float, p_b: float, trust: TrustOpinion, params: UpdateParams, horizon: int
) -> float:
    """Agent B's first-state probability after ``horizon`` steps.

    Exits early once both agents share a side: under the epistemic
    cumulative update that side is absorbing and B's probability moves
    monotonically outward, so the sign of (P_B - p_b) is already decided
    when B has passed its starting point.
    """
    state = _two_agent_state(p_a, p_b, trust)
    pb = p_b
    for _ in range(horizon):
        state = step_network(state, params)
        pa = projected(state.opinions[0])[0]
        pb = projected(state.opinions[1])[0]
        if (pa - 0.5) * (pb - 0.5) > 0.0:
            if pb > 0.5 and pb > p_b:
                return pb
            if pb < 0.5 and pb < p_b:
                return pb
    return pb


def find_fixed_point(
    p_a: float,
    trust: TrustOpinion,
    params: UpdateParams,
    tol: float = 1e-4,
    *,
    horizon: int = 5000,
    max_iterations: int = 60,
) -> float:
    """Initial P_B on the other side of 0.5 that the pair converges back to.

    The returned value is the boundary between the two radicalization
    basins of the epistemic cumulative update: start B barely less extreme
    and both agents converge to A's side, barely more extreme and both
    converge to B's side.  Located by bisection on the sign of the drift
    of agent B's probability measured after a long horizon.

    Requires the cumulative operator with epistemic mode on, and a binary
    uniform-base-rate setup.  ``p_a = 0.5`` is accepted as the degenerate
    symmetric case and maps to 0.5.
    """
    p_a = float(p_a)
    if not (0.0 < p_a < 1.0):
        raise ValueError(f"p_a must be in (0, 1): {p_a!r}")
    if tol <= 0.0:
        raise ValueError(f"tol must be > 0: {tol!r}")
    if params.operator != "cumulative":
        raise ValueError("fixed-point search requires the cumulative operator")
    if not params.epistemic_mode:
        raise ValueError("fixed-point search requires epistemic mode")
    if abs(p_a - 0.5) <= 1e-12:
        return 0.5

    def drift(p_b: float) -> float:
        return _peer_probability_at_horizon(p_a, p_b, trust, params, horizon) - p_b

    # The half-interval endpoint next to 0.5 has a robust drift sign (the
    # peer barely resists, so both agents radicalize toward p_a's side).
    # Toward the extreme the drift flips once past the basin boundary, but
    # flips back within ~1/horizon of the edge, where a finite run cannot
    # push P_B beyond an already extreme start.  Walk a ladder of
    # candidates from mid-range outward and bracket at the first flip.
    ladder = [0.4, 0.25, 0.15, 0.08, 0.04, 0.02, 0.01, 5e-3, 2e-3, 1e-3,
              5e-4, 2e-4, 1e-4, 5e-5, 2e-5, 1e-5]
    if p_a > 0.5:
        near = 0.5 - 1e-5
    else:
        near = 0.5 + 1e-5
        ladder = [1.0 - x for x in ladder]

    d_near = drift(near)
    if d_near == 0.0:
        return near
    lo, d_lo = near, d_near
    hi = d_hi = None
    for candidate in ladder:
        d = drift(candidate)
        if d == 0.0:
            return candidate
        if (d > 0.0) != (d_near > 0.0):
            hi, d_hi = candidate, d
            break
        lo, d_lo = candidate, d
    if hi is None:
        raise BracketingError(
            f"no drift sign change between {near} and the search edge for p_a = {p_a}"
        )

    for _ in range(max_iterations):
        if abs(hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        d_mid = drift(mid)
        if d_mid == 0.0:
            return mid
        if (d_mid > 0.0) == (d_lo > 0.0):
            lo, d_lo = mid, d_mid
        else:
            hi, d_hi = mid, d_mid
    return 0.5 * (lo + hi)
