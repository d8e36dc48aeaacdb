"""JSON scenario documents.

A document has the sections ``game``, ``demand`` (optional), ``init`` and
``integrator``, whose keys are the field names of the matching dataclasses.
Unknown keys anywhere are rejected so that typos never pass silently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .dynamics import IntegratorConfig
from .errors import ConfigError
from .game import GameParams, StrategyState
from .hotelling import DemandParams
from .sweep import Scenario

GAME_REQUIRED = ("u2", "t1", "t2", "s", "pi1", "pi2")
GAME_OPTIONAL = {"g_beta": 1.0, "u1": 0.0, "u3": 0.0, "t": 0.0, "g_decay": 0.0}
DEMAND_REQUIRED = ("T", "p1", "p2", "P1", "P2", "C1", "C2")
DEMAND_OPTIONAL = {"V1": 0.0, "V2": 0.0, "q": 0.0, "e1": 0.0, "e2": 0.0, "h1": 0.0, "mu1": 0.0}
INIT_DEFAULTS = {"x": 0.5, "y": 0.5}
INTEGRATOR_DEFAULTS = {
    "dt": 0.01,
    "t_end": 100.0,
    "tau": 0.0,
    "convergence_tol": 1e-6,
    "convergence_window": 5.0,
}
SECTIONS = ("game", "demand", "init", "integrator")


def _number(section: str, key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key} must be finite")
    return value


def _section(doc: dict, name: str, required, optional: dict, extra=()) -> dict:
    raw = doc.get(name)
    if not isinstance(raw, dict):
        raise ConfigError(f"section {name!r} must be a JSON object")
    unknown = set(raw) - set(required) - set(optional) - set(extra)
    if unknown:
        raise ConfigError(f"unknown key(s) in {name!r}: {', '.join(sorted(unknown))}")
    missing = [k for k in required if k not in raw]
    if missing:
        raise ConfigError(f"missing required key(s) in {name!r}: {', '.join(missing)}")
    out = dict(optional)
    out.update({k: _number(name, k, v) for k, v in raw.items() if k not in extra})
    return out


@dataclass(frozen=True)
class ConfigDocument:
    game: GameParams | None
    demand: DemandParams | None
    init: StrategyState
    integrator: IntegratorConfig

    def scenario(self, name: str = "config") -> Scenario:
        if self.game is None:
            raise ConfigError("config has no 'game' section")
        return Scenario(name, self.game, self.init, self.integrator, self.demand)


def parse_config(doc) -> ConfigDocument:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(sorted(unknown))}")

    demand = None
    if "demand" in doc:
        values = _section(doc, "demand", DEMAND_REQUIRED, DEMAND_OPTIONAL, extra=("assume_equal_base_value",))
        flag = doc["demand"].get("assume_equal_base_value", True)
        if not isinstance(flag, bool):
            raise ConfigError("demand.assume_equal_base_value must be true or false")
        demand = DemandParams(**values, assume_equal_base_value=flag)

    game = None
    if "game" in doc:
        # profits come from the demand layer when it is present
        required = GAME_REQUIRED if demand is None else tuple(k for k in GAME_REQUIRED if k not in ("pi1", "pi2"))
        optional = dict(GAME_OPTIONAL)
        if demand is not None:
            optional.update(pi1=0.0, pi2=0.0)
        game = GameParams(**_section(doc, "game", required, optional))

    init = StrategyState(**(_section(doc, "init", (), INIT_DEFAULTS) if "init" in doc else INIT_DEFAULTS))
    integrator = IntegratorConfig(
        **(_section(doc, "integrator", (), INTEGRATOR_DEFAULTS) if "integrator" in doc else INTEGRATOR_DEFAULTS)
    )
    return ConfigDocument(game, demand, init, integrator)


def load_config(path: str | Path) -> ConfigDocument:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON: {err}") from err
    return parse_config(doc)
