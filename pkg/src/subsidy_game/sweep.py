"""One-parameter sweeps, sensitivity spreads and basin-of-attraction maps."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .dynamics import IntegratorConfig, Trajectory, simulate
from .errors import InvalidParameterError, MismatchedGridError
from .game import GameParams, StrategyState
from .hotelling import DemandParams, FormulaMode, market_outcome

SWEEP_PARAMETERS = ("s", "tau", "t1", "t2", "u2", "g_beta", "init_x", "init_y")
_GAME_FIELDS = {"s", "t1", "t2", "u2", "g_beta"}

ADOPTION_THRESHOLD = 0.99
CORNER_TOL = 1e-3
NO_LABEL = "none"


@dataclass(frozen=True)
class Scenario:
    name: str
    game: GameParams
    init: StrategyState
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    demand: DemandParams | None = None
    demand_mode: FormulaMode = FormulaMode.CORRECTED

    def resolved_game(self) -> GameParams:
        """Game parameters with pi1/pi2 replaced from the demand layer when present."""
        if self.demand is None:
            return self.game
        return self.game.with_market(market_outcome(self.demand, self.demand_mode))

    def with_value(self, parameter: str, value: float) -> Scenario:
        if parameter in _GAME_FIELDS:
            return replace(self, game=replace(self.game, **{parameter: value}))
        if parameter == "tau":
            return replace(self, integrator=replace(self.integrator, tau=value))
        if parameter == "init_x":
            return replace(self, init=StrategyState(value, self.init.y))
        if parameter == "init_y":
            return replace(self, init=StrategyState(self.init.x, value))
        raise InvalidParameterError(
            f"unknown sweep parameter {parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}"
        )


def run_scenario(scenario: Scenario) -> Trajectory:
    return simulate(scenario.resolved_game(), scenario.init, scenario.integrator)


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    parameter: str
    values: Sequence[float]

    def __post_init__(self) -> None:
        if self.parameter not in SWEEP_PARAMETERS:
            raise InvalidParameterError(
                f"unknown sweep parameter {self.parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}"
            )
        if len(self.values) == 0:
            raise InvalidParameterError("sweep needs at least one value")
        for v in self.values:
            if not math.isfinite(v):
                raise InvalidParameterError(f"sweep value {v!r} is not finite")

    def scenarios(self) -> list[tuple[float, Scenario]]:
        """One scenario per value, sorted by value; validation errors name the value."""
        out = []
        for v in sorted(self.values):
            try:
                out.append((v, self.base.with_value(self.parameter, v)))
            except ValueError as err:
                raise type(err)(f"{self.parameter}={v!r}: {err}") from err
        return out


@dataclass(frozen=True)
class Sensitivity:
    spread_government: float
    spread_company: float


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    runs: list[tuple[float, Trajectory]]
    sensitivity: Sensitivity


def _map(fn, items: list, workers: int | None) -> list:
    if not workers or workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order, whatever the completion order
        return list(pool.map(fn, items))


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Integrate every scenario of ``spec``; ``workers > 1`` fans runs out to processes."""
    pairs = spec.scenarios()
    jobs = [(spec.parameter, v, sc) for v, sc in pairs]
    runs = list(zip([v for v, _ in pairs], _map(_run_annotated, jobs, workers)))
    return SweepResult(spec.parameter, runs, sensitivity_metric(runs))


def _run_annotated(job: tuple[str, float, Scenario]) -> Trajectory:
    parameter, value, scenario = job
    try:
        return run_scenario(scenario)
    except (ValueError, ArithmeticError) as err:
        raise type(err)(f"{parameter}={value!r}: {err}") from err


def sensitivity_metric(runs: SweepResult | Sequence[tuple[float, Trajectory]]) -> Sensitivity:
    """Largest across-run range of y(t) and of x(t), over the shared time grid.

    A single run has zero spread by definition.
    """
    if isinstance(runs, SweepResult):
        runs = runs.runs
    if not runs:
        raise InvalidParameterError("no runs to compare")
    trajs = [t for _, t in runs]
    first = trajs[0]
    for traj in trajs[1:]:
        if traj.dt != first.dt or len(traj) != len(first):
            raise MismatchedGridError(
                f"runs differ in grid: dt {traj.dt!r} vs {first.dt!r}, "
                f"{len(traj)} vs {len(first)} samples"
            )
    Y = np.vstack([t.y for t in trajs])
    X = np.vstack([t.x for t in trajs])
    return Sensitivity(
        spread_government=float((Y.max(axis=0) - Y.min(axis=0)).max()),
        spread_company=float((X.max(axis=0) - X.min(axis=0)).max()),
    )


def time_to_threshold(traj: Trajectory, threshold: float = ADOPTION_THRESHOLD) -> float | None:
    """First grid time with x >= threshold, or None."""
    hits = np.flatnonzero(traj.x >= threshold)
    return float(traj.times[hits[0]]) if hits.size else None


def threshold_report(result: SweepResult, threshold: float = ADOPTION_THRESHOLD) -> dict:
    """Secondary sensitivity view: adoption times per value and their spread.

    ``non_increasing`` records whether faster adoption follows larger values;
    it is an observation, not a guarantee.
    """
    times = [time_to_threshold(t, threshold) for _, t in result.runs]
    reached = [t for t in times if t is not None]
    return {
        "threshold": threshold,
        "times": times,
        "spread": (max(reached) - min(reached)) if reached else None,
        "non_increasing": all(
            a is not None and b is not None and b <= a for a, b in zip(times, times[1:])
        ),
    }


def corner_label(state: StrategyState | None, tol: float = CORNER_TOL) -> str:
    if state is None:
        return NO_LABEL
    cx, cy = round(state.x), round(state.y)
    if abs(state.x - cx) < tol and abs(state.y - cy) < tol:
        return f"({cx},{cy})"
    return NO_LABEL


def basin_map(scenario: Scenario, grid_n: int, workers: int | None = None) -> list[list[str]]:
    """Label a grid_n x grid_n lattice of interior starts by the corner reached.

    ``labels[i][j]`` belongs to the start ((i + 0.5)/grid_n, (j + 0.5)/grid_n).
    Runs that have not converged by t_end, or that settle away from a corner,
    get ``"none"``.
    """
    if grid_n < 2:
        raise InvalidParameterError(f"grid_n must be >= 2, got {grid_n!r}")
    starts = [
        replace(scenario, init=StrategyState((i + 0.5) / grid_n, (j + 0.5) / grid_n))
        for i in range(grid_n)
        for j in range(grid_n)
    ]
    labels = [corner_label(t.converged_to) for t in _map(run_scenario, starts, workers)]
    return [labels[i * grid_n:(i + 1) * grid_n] for i in range(grid_n)]
