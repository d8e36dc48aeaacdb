"""Two-population subsidy game: payoffs, replicator equations, equilibria.

Convention throughout: ``x`` is the probability that the company adopts the
innovative equipment and ``y`` the probability that the government subsidizes.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

from .errors import BoundaryWarning, DegenerateParameterWarning, InvalidParameterError
from .hotelling import MarketOutcome

#: real parts within this distance of zero are not classified
STABILITY_TOL = 1e-9


@dataclass(frozen=True)
class GameParams:
    u2: float
    t1: float
    t2: float
    s: float
    pi1: float
    pi2: float
    g_beta: float = 1.0
    u1: float = 0.0
    u3: float = 0.0
    t: float = 0.0
    # g_beta(time) = g_beta * exp(-g_decay * time); 0 keeps the coefficient constant
    g_decay: float = 0.0

    def __post_init__(self) -> None:
        for name in ("u1", "u2", "u3", "t", "t1", "t2", "s", "g_beta", "pi1", "pi2", "g_decay"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")
        for name in ("t", "t1", "t2", "s", "g_decay"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        if not 0.0 <= self.g_beta <= 1.0:
            raise InvalidParameterError(f"g_beta must lie in [0, 1], got {self.g_beta!r}")

    @property
    def subsidy(self) -> float:
        """Effective subsidy paid to an adopting company, g_beta * s (at time 0)."""
        return self.g_beta * self.s

    def subsidy_at(self, time: float) -> float:
        if self.g_decay == 0.0:
            return self.g_beta * self.s
        return self.g_beta * math.exp(-self.g_decay * time) * self.s

    def with_market(self, outcome: MarketOutcome) -> GameParams:
        """Copy with pi1/pi2 taken from a Hotelling market outcome."""
        return replace(self, pi1=outcome.pi1, pi2=outcome.pi2)


@dataclass(frozen=True)
class StrategyState:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise InvalidParameterError(f"state ({self.x!r}, {self.y!r}) outside [0, 1]^2")


ADOPT, KEEP = 0, 1
SUBSIDIZE, NO_SUBSIDY = 0, 1


@dataclass(frozen=True)
class PayoffBimatrix:
    """Cell ``entries[company][government]`` holds (company payoff, government payoff).

    Rows are indexed by ADOPT/KEEP, columns by SUBSIDIZE/NO_SUBSIDY.
    """

    entries: tuple[tuple[tuple[float, float], tuple[float, float]], tuple[tuple[float, float], tuple[float, float]]]

    def company(self, row: int, col: int) -> float:
        return self.entries[row][col][0]

    def government(self, row: int, col: int) -> float:
        return self.entries[row][col][1]

    def shifted(self, company: float = 0.0, government: float = 0.0) -> PayoffBimatrix:
        """Add constants to every company cell and every government cell."""
        return PayoffBimatrix(
            tuple(
                tuple((c + company, g + government) for c, g in row) for row in self.entries
            )  # type: ignore[arg-type]
        )


@dataclass(frozen=True)
class ExpectedPayoffs:
    E11: float  # company, adopt
    E12: float  # company, keep
    E1: float
    E21: float  # government, subsidize
    E22: float  # government, no subsidy
    E2: float


class Stability(str, Enum):
    ESS = "ESS"
    SADDLE = "saddle"
    UNSTABLE = "unstable"
    UNDETERMINED = "center/undetermined"


@dataclass(frozen=True)
class Equilibrium:
    point: StrategyState
    jacobian: tuple[tuple[float, float], tuple[float, float]]
    eigenvalues: tuple[complex, complex]
    classification: Stability
    is_interior: bool

    @property
    def is_ess(self) -> bool:
        return self.classification is Stability.ESS


def build_bimatrix(p: GameParams) -> PayoffBimatrix:
    """Payoff table consistent with both replicator equations.

    The penalty tax t2 is only levied when the government runs the subsidy
    policy; the subsidy and the tax cut are transfers, so they appear with
    opposite signs for the two players.
    """
    gs = p.subsidy
    adopt_sub = (p.pi1 - p.t + p.t1 + gs, p.u1 + p.u2 + p.t - p.t1 - gs)
    adopt_none = (p.pi1 - p.t, p.u1 + p.t)
    keep_sub = (p.pi2 - p.t - p.t2, p.u3 + p.t + p.t2)
    keep_none = (p.pi2 - p.t, p.u3 + p.t)
    return PayoffBimatrix(((adopt_sub, adopt_none), (keep_sub, keep_none)))


def expected_payoffs(m: PayoffBimatrix, state: StrategyState) -> ExpectedPayoffs:
    x, y = state.x, state.y
    E11 = y * m.company(ADOPT, SUBSIDIZE) + (1 - y) * m.company(ADOPT, NO_SUBSIDY)
    E12 = y * m.company(KEEP, SUBSIDIZE) + (1 - y) * m.company(KEEP, NO_SUBSIDY)
    E21 = x * m.government(ADOPT, SUBSIDIZE) + (1 - x) * m.government(KEEP, SUBSIDIZE)
    E22 = x * m.government(ADOPT, NO_SUBSIDY) + (1 - x) * m.government(KEEP, NO_SUBSIDY)
    return ExpectedPayoffs(
        E11=E11,
        E12=E12,
        E1=x * E11 + (1 - x) * E12,
        E21=E21,
        E22=E22,
        E2=y * E21 + (1 - y) * E22,
    )


def company_advantage(y: float, p: GameParams, subsidy: float | None = None) -> float:
    """E11 - E12: the company's gain from adopting against subsidy probability y."""
    gs = p.subsidy if subsidy is None else subsidy
    return y * (gs + p.t1 + p.t2) + (p.pi1 - p.pi2)


def government_advantage(x: float, p: GameParams, subsidy: float | None = None) -> float:
    """E21 - E22: the government's gain from subsidizing against adoption probability x."""
    gs = p.subsidy if subsidy is None else subsidy
    return x * (p.u2 - p.t1 - gs) + p.t2 * (1 - x)


def company_replicator(state: StrategyState, p: GameParams) -> float:
    """dx/dt for the company population."""
    x = state.x
    return x * (1 - x) * company_advantage(state.y, p)


def government_replicator(state: StrategyState, p: GameParams) -> float:
    """dy/dt for the government population."""
    y = state.y
    return y * (1 - y) * government_advantage(state.x, p)


def bimatrix_replicator(m: PayoffBimatrix, state: StrategyState) -> tuple[float, float]:
    """(dx/dt, dy/dt) computed from a payoff table via expected payoffs."""
    e = expected_payoffs(m, state)
    return state.x * (1 - state.x) * (e.E11 - e.E12), state.y * (1 - state.y) * (e.E21 - e.E22)


def interior_candidate(p: GameParams) -> tuple[float, float] | None:
    """Point where both advantages vanish, or None when a denominator is zero."""
    gs = p.subsidy
    den_x = p.t2 + p.t1 + gs - p.u2
    den_y = gs + p.t1 + p.t2
    if den_x == 0 or den_y == 0:
        return None
    return p.t2 / den_x, (p.pi2 - p.pi1) / den_y


def fixed_points(p: GameParams) -> list[StrategyState]:
    """The four corners, plus the interior rest point when it lies in (0, 1)^2.

    Emits :class:`DegenerateParameterWarning` if the interior candidate is
    undefined.
    """
    points = [StrategyState(x, y) for x in (0.0, 1.0) for y in (0.0, 1.0)]
    candidate = interior_candidate(p)
    if candidate is None:
        warnings.warn(
            "zero denominator in the interior fixed point; only corners returned",
            DegenerateParameterWarning,
            stacklevel=2,
        )
        return points
    xs, ys = candidate
    if 0.0 < xs < 1.0 and 0.0 < ys < 1.0:
        points.append(StrategyState(xs, ys))
    return points


def jacobian(state: StrategyState, p: GameParams) -> tuple[tuple[float, float], tuple[float, float]]:
    x, y = state.x, state.y
    gs = p.subsidy
    a = company_advantage(y, p)
    b = government_advantage(x, p)
    return (
        ((1 - 2 * x) * a, x * (1 - x) * (gs + p.t1 + p.t2)),
        (y * (1 - y) * (p.u2 - p.t1 - gs - p.t2), (1 - 2 * y) * b),
    )


def eigenvalues_2x2(J: tuple[tuple[float, float], tuple[float, float]]) -> tuple[complex, complex]:
    (a, b), (c, d) = J
    if b == 0.0 or c == 0.0:
        # triangular: eigenvalues are the diagonal, exactly
        return complex(a), complex(d)
    half_tr = (a + d) / 2
    det = a * d - b * c
    root = cmath.sqrt(half_tr * half_tr - det)
    return half_tr + root, half_tr - root


def classify(point: StrategyState, p: GameParams) -> Equilibrium:
    J = jacobian(point, p)
    eig = eigenvalues_2x2(J)
    re = [e.real for e in eig]
    if any(abs(r) <= STABILITY_TOL for r in re):
        kind = Stability.UNDETERMINED
    elif all(r < 0 for r in re):
        kind = Stability.ESS
    elif all(r > 0 for r in re):
        kind = Stability.UNSTABLE
    else:
        kind = Stability.SADDLE
    return Equilibrium(
        point=point,
        jacobian=J,
        eigenvalues=eig,
        classification=kind,
        is_interior=0.0 < point.x < 1.0 and 0.0 < point.y < 1.0,
    )


def equilibria(p: GameParams) -> list[Equilibrium]:
    return [classify(pt, p) for pt in fixed_points(p)]


def combination_label(p: GameParams) -> int | None:
    """Parameter regime from the signs of (u2 - g_beta*s - t1) and (pi1 - pi2).

    ====  =====================  ============
    label government side       company side
    ====  =====================  ============
    1     u2 > g_beta*s + t1     pi2 > pi1
    2     u2 > g_beta*s + t1     pi2 < pi1
    3     u2 < g_beta*s + t1     pi2 > pi1
    4     u2 < g_beta*s + t1     pi2 < pi1
    ====  =====================  ============

    Returns None with a :class:`BoundaryWarning` on an exact tie.
    """
    cost = p.subsidy + p.t1
    if p.u2 == cost or p.pi1 == p.pi2:
        warnings.warn(
            f"regime boundary: u2={p.u2!r} vs g_beta*s+t1={cost!r}, pi1={p.pi1!r} vs pi2={p.pi2!r}",
            BoundaryWarning,
            stacklevel=2,
        )
        return None
    subsidy_pays = p.u2 > cost
    adoption_pays = p.pi1 > p.pi2
    if subsidy_pays:
        return 2 if adoption_pays else 1
    return 4 if adoption_pays else 3
