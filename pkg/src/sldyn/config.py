"""Scenario configuration: JSON parsing, validation, serialization.

A scenario file pins down the whole simulation: agents with their initial
opinions, the trust matrix, the fusion operator, the prior weight, the
epistemic toggle, the horizon, and the convergence detector's settings.
Unknown keys are rejected and every error names the offending field.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

from .dynamics import NetworkState, UpdateParams
from .fusion import FUSION_OPERATORS
from .opinion import DomainSpec, Opinion
from .trust import TrustOpinion

_TOP_KEYS = {"agents", "trust", "operator", "prior_weight", "epistemic_mode",
             "t_max", "convergence", "domain"}
_AGENT_KEYS = {"id", "opinion"}
_OPINION_KEYS = {"belief", "uncertainty", "base_rate"}
_CONVERGENCE_KEYS = {"eps", "window"}

DEFAULT_EPS = 1e-6
DEFAULT_WINDOW = 10

#: Environment variable overriding the default prior weight.
PRIOR_WEIGHT_ENV = "SL_DEFAULT_W"


class ConfigError(ValueError):
    """A scenario document failed validation; the message names the field."""


def default_prior_weight() -> float:
    raw = os.environ.get(PRIOR_WEIGHT_ENV)
    if raw is None:
        return 2.0
    try:
        w = float(raw)
    except ValueError:
        raise ConfigError(f"{PRIOR_WEIGHT_ENV}: not a number: {raw!r}") from None
    if not w > 0.0:
        raise ConfigError(f"{PRIOR_WEIGHT_ENV}: must be > 0, got {raw!r}")
    return w


@dataclass(frozen=True)
class ScenarioConfig:
    agent_ids: tuple[str, ...]
    opinions: tuple[Opinion, ...]
    trust: tuple[tuple[float, ...], ...]
    operator: str
    t_max: int
    prior_weight: float = 2.0
    epistemic_mode: bool = False
    eps: float = DEFAULT_EPS
    window: int = DEFAULT_WINDOW
    domain: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.agent_ids)
        if n < 1:
            raise ConfigError("agents: need at least one agent")
        if len(set(self.agent_ids)) != n:
            raise ConfigError("agents: identifiers must be distinct")
        if len(self.opinions) != n:
            raise ConfigError(f"agents: {n} ids but {len(self.opinions)} opinions")
        k = self.opinions[0].k
        for i, op in enumerate(self.opinions):
            if op.k != k:
                raise ConfigError(f"agents[{i}].opinion: domain size {op.k} != {k}")
            if op.base_rate != self.opinions[0].base_rate:
                raise ConfigError(f"agents[{i}].opinion.base_rate: differs across agents")
        if len(self.trust) != n or any(len(row) != n for row in self.trust):
            raise ConfigError(f"trust: must be a {n}x{n} matrix")
        for i, row in enumerate(self.trust):
            for j, t in enumerate(row):
                if not (isinstance(t, float) and 0.0 <= t <= 1.0):
                    raise ConfigError(f"trust[{i}][{j}]: must be in [0, 1], got {t!r}")
        if self.operator not in FUSION_OPERATORS:
            raise ConfigError(
                f"operator: unknown token {self.operator!r}; "
                f"expected one of {sorted(FUSION_OPERATORS)}"
            )
        if self.t_max < 0:
            raise ConfigError(f"t_max: must be >= 0, got {self.t_max}")
        if not self.prior_weight > 0.0:
            raise ConfigError(f"prior_weight: must be > 0, got {self.prior_weight!r}")
        if not self.eps > 0.0:
            raise ConfigError(f"convergence.eps: must be > 0, got {self.eps!r}")
        if self.window < 1:
            raise ConfigError(f"convergence.window: must be >= 1, got {self.window}")
        if self.domain is not None:
            try:
                spec = DomainSpec(self.domain)
            except ValueError as exc:
                raise ConfigError(f"domain: {exc}") from None
            if spec.k != k:
                raise ConfigError(
                    f"domain: {spec.k} labels but opinions have {k} states"
                )

    @property
    def n(self) -> int:
        return len(self.agent_ids)

    @property
    def k(self) -> int:
        return self.opinions[0].k

    def to_network_state(self) -> NetworkState:
        trust = tuple(tuple(TrustOpinion(t) for t in row) for row in self.trust)
        return NetworkState(self.agent_ids, self.opinions, trust)

    def to_update_params(self) -> UpdateParams:
        return UpdateParams(self.operator, self.prior_weight, self.epistemic_mode)

    def to_json_dict(self) -> dict:
        doc = {
            "agents": [
                {"id": aid, "opinion": op.to_dict()}
                for aid, op in zip(self.agent_ids, self.opinions)
            ],
            "trust": [list(row) for row in self.trust],
            "operator": self.operator,
            "prior_weight": self.prior_weight,
            "epistemic_mode": self.epistemic_mode,
            "t_max": self.t_max,
            "convergence": {"eps": self.eps, "window": self.window},
        }
        if self.domain is not None:
            doc["domain"] = list(self.domain)
        return doc

    def with_overrides(
        self,
        *,
        operator: str | None = None,
        t_max: int | None = None,
        eps: float | None = None,
        epistemic_mode: bool | None = None,
    ) -> "ScenarioConfig":
        changes = {}
        if operator is not None:
            changes["operator"] = operator
        if t_max is not None:
            changes["t_max"] = t_max
        if eps is not None:
            changes["eps"] = eps
        if epistemic_mode is not None:
            changes["epistemic_mode"] = epistemic_mode
        return replace(self, **changes) if changes else self


def _reject_unknown(obj: dict, allowed: set, path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")


def _get(obj: dict, key: str, path: str):
    if key not in obj:
        raise ConfigError(f"{path}: missing required key {key!r}")
    return obj[key]


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _as_bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{path}: expected a boolean, got {value!r}")
    return value


def _as_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(f"{path}: expected an array, got {value!r}")
    return value


def _as_dict(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected an object, got {value!r}")
    return value


def _parse_opinion(obj, path: str) -> Opinion:
    obj = _as_dict(obj, path)
    _reject_unknown(obj, _OPINION_KEYS, path)
    belief = _as_list(_get(obj, "belief", path), f"{path}.belief")
    base_rate = _as_list(_get(obj, "base_rate", path), f"{path}.base_rate")
    uncertainty = _as_number(_get(obj, "uncertainty", path), f"{path}.uncertainty")
    belief_vals = tuple(_as_number(x, f"{path}.belief[{i}]") for i, x in enumerate(belief))
    base_vals = tuple(_as_number(x, f"{path}.base_rate[{i}]") for i, x in enumerate(base_rate))
    try:
        return Opinion(belief_vals, uncertainty, base_vals)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def config_from_dict(raw: dict) -> ScenarioConfig:
    raw = _as_dict(raw, "config")
    _reject_unknown(raw, _TOP_KEYS, "config")

    agents_raw = _as_list(_get(raw, "agents", "config"), "agents")
    ids = []
    opinions = []
    for i, entry in enumerate(agents_raw):
        path = f"agents[{i}]"
        entry = _as_dict(entry, path)
        _reject_unknown(entry, _AGENT_KEYS, path)
        aid = _get(entry, "id", path)
        if not isinstance(aid, str) or not aid:
            raise ConfigError(f"{path}.id: expected a non-empty string, got {aid!r}")
        ids.append(aid)
        opinions.append(_parse_opinion(_get(entry, "opinion", path), f"{path}.opinion"))

    trust_raw = _as_list(_get(raw, "trust", "config"), "trust")
    trust = []
    for i, row in enumerate(trust_raw):
        row = _as_list(row, f"trust[{i}]")
        trust.append(
            tuple(_as_number(t, f"trust[{i}][{j}]") for j, t in enumerate(row))
        )

    operator = _get(raw, "operator", "config")
    if not isinstance(operator, str):
        raise ConfigError(f"operator: expected a string, got {operator!r}")

    t_max = _as_int(_get(raw, "t_max", "config"), "t_max")

    if "prior_weight" in raw:
        prior_weight = _as_number(raw["prior_weight"], "prior_weight")
    else:
        prior_weight = default_prior_weight()
    epistemic = False
    if "epistemic_mode" in raw:
        epistemic = _as_bool(raw["epistemic_mode"], "epistemic_mode")

    eps, window = DEFAULT_EPS, DEFAULT_WINDOW
    if "convergence" in raw:
        conv = _as_dict(raw["convergence"], "convergence")
        _reject_unknown(conv, _CONVERGENCE_KEYS, "convergence")
        if "eps" in conv:
            eps = _as_number(conv["eps"], "convergence.eps")
        if "window" in conv:
            window = _as_int(conv["window"], "convergence.window")

    domain = None
    if "domain" in raw:
        labels = _as_list(raw["domain"], "domain")
        for i, lab in enumerate(labels):
            if not isinstance(lab, str):
                raise ConfigError(f"domain[{i}]: expected a string, got {lab!r}")
        domain = tuple(labels)

    return ScenarioConfig(
        agent_ids=tuple(ids),
        opinions=tuple(opinions),
        trust=tuple(trust),
        operator=operator,
        t_max=t_max,
        prior_weight=prior_weight,
        epistemic_mode=epistemic,
        eps=eps,
        window=window,
        domain=domain,
    )


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario JSON document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    return config_from_dict(raw)


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
