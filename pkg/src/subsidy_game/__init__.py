"""Evolutionary game between a subsidizing government and power companies
choosing between innovative and traditional transmission equipment."""

from .dynamics import IntegratorConfig, Trajectory, detect_convergence, integrate, integrate_delayed, simulate
from .errors import (
    BoundaryWarning,
    ConfigError,
    DegenerateParameterWarning,
    InvalidParameterError,
    MismatchedGridError,
    NumericalOvershootError,
)
from .game import (
    Equilibrium,
    GameParams,
    PayoffBimatrix,
    Stability,
    StrategyState,
    build_bimatrix,
    classify,
    combination_label,
    company_replicator,
    equilibria,
    expected_payoffs,
    fixed_points,
    government_replicator,
)
from .hotelling import (
    DemandParams,
    FormulaMode,
    MarketOutcome,
    indifference_point,
    market_outcome,
    utility_new,
    utility_traditional,
)
from .sweep import Scenario, SweepResult, SweepSpec, basin_map, run_sweep, sensitivity_metric

__version__ = "0.1.0"

__all__ = [
    "BoundaryWarning",
    "ConfigError",
    "DegenerateParameterWarning",
    "DemandParams",
    "Equilibrium",
    "FormulaMode",
    "GameParams",
    "IntegratorConfig",
    "InvalidParameterError",
    "MarketOutcome",
    "MismatchedGridError",
    "NumericalOvershootError",
    "PayoffBimatrix",
    "Scenario",
    "Stability",
    "StrategyState",
    "SweepResult",
    "SweepSpec",
    "Trajectory",
    "basin_map",
    "build_bimatrix",
    "classify",
    "combination_label",
    "company_replicator",
    "detect_convergence",
    "equilibria",
    "expected_payoffs",
    "fixed_points",
    "government_replicator",
    "indifference_point",
    "integrate",
    "integrate_delayed",
    "market_outcome",
    "run_sweep",
    "sensitivity_metric",
    "simulate",
    "utility_new",
    "utility_traditional",
]
