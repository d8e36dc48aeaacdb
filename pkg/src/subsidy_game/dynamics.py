"""Fixed-step RK4 integration of the replicator system, with optional delay.

With a delay ``tau`` each player reacts to the opponent's strategy mix as it
was ``tau`` time units earlier, while its own x(1-x) / y(1-y) factor stays
instantaneous:

    dx/dt = x (1 - x) [y(t - tau) (g s + t1 + t2) + (pi1 - pi2)]
    dy/dt = y (1 - y) [x(t - tau) (u2 - t1 - g s) + t2 (1 - x(t - tau))]

The history on [-tau, 0] is constant and equal to the initial state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, NumericalOvershootError
from .game import GameParams, PayoffBimatrix, StrategyState, ADOPT, KEEP, SUBSIDIZE, NO_SUBSIDY

OVERSHOOT_LIMIT = 1e-6

# f(time, x, y, x_seen, y_seen) -> (dx/dt, dy/dt); x_seen/y_seen are the
# opponent mixes each player reacts to (lagged when tau > 0)
Rhs = Callable[[float, float, float, float, float], tuple]


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 0.01
    t_end: float = 100.0
    tau: float = 0.0
    convergence_tol: float = 1e-6
    convergence_window: float = 5.0

    def __post_init__(self) -> None:
        for name in ("dt", "t_end", "tau", "convergence_tol", "convergence_window"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
        if self.dt <= 0:
            raise ConfigError(f"dt must be > 0, got {self.dt!r}")
        if self.t_end <= 0 or self.t_end < self.dt:
            raise ConfigError(f"t_end must be >= dt > 0, got t_end={self.t_end!r}, dt={self.dt!r}")
        if self.tau < 0:
            raise ConfigError(f"tau must be >= 0, got {self.tau!r}")
        if self.convergence_tol <= 0 or self.convergence_window <= 0:
            raise ConfigError("convergence_tol and convergence_window must be > 0")
        if self.tau > 0:
            self.delay_steps  # raises when tau is not a multiple of dt

    @property
    def n_steps(self) -> int:
        """floor(t_end / dt), forgiving quotients that miss an integer by round-off."""
        ratio = self.t_end / self.dt
        nearest = round(ratio)
        if abs(ratio - nearest) <= 1e-9 * max(1.0, ratio):
            return int(nearest)
        return math.floor(ratio)

    @property
    def delay_steps(self) -> int:
        m = round(self.tau / self.dt)
        if abs(m * self.dt - self.tau) > 1e-9 * max(1.0, self.tau):
            raise ConfigError(f"tau={self.tau!r} is not an integer multiple of dt={self.dt!r}")
        return int(m)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    x: np.ndarray
    y: np.ndarray
    converged_to: StrategyState | None = None
    convergence_time: float | None = None
    #: largest distance outside [0, 1] seen before clamping
    max_overshoot: float = 0.0
    dt: float = field(default=0.0)
    tau: float = 0.0

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> list[StrategyState]:
        return [StrategyState(float(a), float(b)) for a, b in zip(self.x, self.y)]

    @property
    def final(self) -> StrategyState:
        return StrategyState(float(self.x[-1]), float(self.y[-1]))


def make_rhs(p: GameParams, payoffs: PayoffBimatrix | None = None) -> Rhs:
    """Right-hand side from the closed-form advantages, or from a payoff table."""
    if payoffs is not None:
        if p.g_decay != 0.0:
            raise ConfigError("a fixed payoff table cannot carry a decaying subsidy")
        c_as, c_an = payoffs.company(ADOPT, SUBSIDIZE), payoffs.company(ADOPT, NO_SUBSIDY)
        c_ks, c_kn = payoffs.company(KEEP, SUBSIDIZE), payoffs.company(KEEP, NO_SUBSIDY)
        g_as, g_ks = payoffs.government(ADOPT, SUBSIDIZE), payoffs.government(KEEP, SUBSIDIZE)
        g_an, g_kn = payoffs.government(ADOPT, NO_SUBSIDY), payoffs.government(KEEP, NO_SUBSIDY)

        def table_rhs(time, x, y, xs, ys):
            e11 = ys * c_as + (1 - ys) * c_an
            e12 = ys * c_ks + (1 - ys) * c_kn
            e21 = xs * g_as + (1 - xs) * g_ks
            e22 = xs * g_an + (1 - xs) * g_kn
            return x * (1 - x) * (e11 - e12), y * (1 - y) * (e21 - e22)

        return table_rhs

    dpi = p.pi1 - p.pi2
    t1, t2, u2 = p.t1, p.t2, p.u2

    if p.g_decay == 0.0:
        gs = p.subsidy

        def rhs(time, x, y, xs, ys):
            return (
                x * (1 - x) * (ys * (gs + t1 + t2) + dpi),
                y * (1 - y) * (xs * (u2 - t1 - gs) + t2 * (1 - xs)),
            )

        return rhs

    def decaying_rhs(time, x, y, xs, ys):
        gs = p.subsidy_at(time)
        return (
            x * (1 - x) * (ys * (gs + t1 + t2) + dpi),
            y * (1 - y) * (xs * (u2 - t1 - gs) + t2 * (1 - xs)),
        )

    return decaying_rhs


def _clamp(v: float) -> tuple[float, float]:
    """Return (clamped value, overshoot distance)."""
    if v < 0.0:
        return 0.0, -v
    if v > 1.0:
        return 1.0, v - 1.0
    return v, 0.0


def _accept(x: float, y: float, time: float) -> tuple[float, float, float]:
    x, ox = _clamp(x)
    y, oy = _clamp(y)
    over = max(ox, oy)
    if over > OVERSHOOT_LIMIT:
        raise NumericalOvershootError(
            f"state left [0,1]^2 by {over:.3g} at t={time:g}; reduce dt"
        )
    return x, y, over


def integrate(
    p: GameParams,
    init: StrategyState,
    cfg: IntegratorConfig,
    payoffs: PayoffBimatrix | None = None,
) -> Trajectory:
    """Classical RK4 without delay. ``cfg.tau`` must be 0."""
    if cfg.tau != 0:
        raise ConfigError("integrate() handles tau = 0 only; use integrate_delayed()")
    f = make_rhs(p, payoffs)
    dt, n = cfg.dt, cfg.n_steps
    half = dt / 2
    xs = [0.0] * (n + 1)
    ys = [0.0] * (n + 1)
    x, y = init.x, init.y
    xs[0], ys[0] = x, y
    worst = 0.0
    for k in range(n):
        t = k * dt
        k1x, k1y = f(t, x, y, x, y)
        ax, ay = x + half * k1x, y + half * k1y
        k2x, k2y = f(t + half, ax, ay, ax, ay)
        bx, by = x + half * k2x, y + half * k2y
        k3x, k3y = f(t + half, bx, by, bx, by)
        cx, cy = x + dt * k3x, y + dt * k3y
        k4x, k4y = f(t + dt, cx, cy, cx, cy)
        x = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        y = y + dt / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        x, y, over = _accept(x, y, t + dt)
        worst = max(worst, over)
        xs[k + 1], ys[k + 1] = x, y
    return _finish(p, cfg, payoffs, xs, ys, worst)


def integrate_delayed(
    p: GameParams,
    init: StrategyState,
    cfg: IntegratorConfig,
    payoffs: PayoffBimatrix | None = None,
) -> Trajectory:
    """RK4 with the opponent's strategy lagged by ``cfg.tau`` (a positive multiple of dt).

    Lagged values at half steps are linearly interpolated between stored grid
    points; since tau >= dt every lookup lands on already computed history.
    """
    if cfg.tau <= 0:
        raise ConfigError("integrate_delayed() needs tau > 0; use integrate() for tau = 0")
    m = cfg.delay_steps
    f = make_rhs(p, payoffs)
    dt, n = cfg.dt, cfg.n_steps
    half = dt / 2
    xs = [0.0] * (n + 1)
    ys = [0.0] * (n + 1)
    x, y = init.x, init.y
    xs[0], ys[0] = x, y
    worst = 0.0
    for k in range(n):
        t = k * dt
        j = k - m  # grid index of t - tau
        if j >= 0:
            xl0, yl0 = xs[j], ys[j]
            xl1, yl1 = xs[j + 1], ys[j + 1]
            xlh, ylh = 0.5 * (xl0 + xl1), 0.5 * (yl0 + yl1)
        else:
            # t - tau + dt <= 0: every lookup falls in the constant history
            xl0 = xlh = xl1 = init.x
            yl0 = ylh = yl1 = init.y
        k1x, k1y = f(t, x, y, xl0, yl0)
        k2x, k2y = f(t + half, x + half * k1x, y + half * k1y, xlh, ylh)
        k3x, k3y = f(t + half, x + half * k2x, y + half * k2y, xlh, ylh)
        k4x, k4y = f(t + dt, x + dt * k3x, y + dt * k3y, xl1, yl1)
        x = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        y = y + dt / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        x, y, over = _accept(x, y, t + dt)
        worst = max(worst, over)
        xs[k + 1], ys[k + 1] = x, y
    return _finish(p, cfg, payoffs, xs, ys, worst)


def simulate(
    p: GameParams,
    init: StrategyState,
    cfg: IntegratorConfig,
    payoffs: PayoffBimatrix | None = None,
) -> Trajectory:
    """Dispatch to :func:`integrate` or :func:`integrate_delayed` on ``cfg.tau``."""
    if cfg.tau > 0:
        return integrate_delayed(p, init, cfg, payoffs)
    return integrate(p, init, cfg, payoffs)


def _finish(p, cfg, payoffs, xs, ys, worst) -> Trajectory:
    n = len(xs) - 1
    traj = Trajectory(
        times=np.arange(n + 1, dtype=float) * cfg.dt,
        x=np.asarray(xs, dtype=float),
        y=np.asarray(ys, dtype=float),
        max_overshoot=worst,
        dt=cfg.dt,
        tau=cfg.tau,
    )
    hit = detect_convergence(traj, p, cfg, payoffs)
    if hit is None:
        return traj
    state, when = hit
    return Trajectory(
        times=traj.times,
        x=traj.x,
        y=traj.y,
        converged_to=state,
        convergence_time=when,
        max_overshoot=worst,
        dt=cfg.dt,
        tau=cfg.tau,
    )


def rhs_norms(
    traj: Trajectory,
    p: GameParams,
    cfg: IntegratorConfig,
    payoffs: PayoffBimatrix | None = None,
) -> np.ndarray:
    """Max-norm of (dx/dt, dy/dt) at every grid point, with the delay applied."""
    f = make_rhs(p, payoffs)  # also rejects payoffs combined with g_decay
    m = cfg.delay_steps if cfg.tau > 0 else 0
    idx = np.maximum(np.arange(len(traj)) - m, 0)
    xl, yl = traj.x[idx], traj.y[idx]
    if p.g_decay != 0.0:
        dx, dy = _decay_rhs(p, traj, xl, yl)
    else:
        dx, dy = f(traj.times, traj.x, traj.y, xl, yl)
    return np.maximum(np.abs(dx), np.abs(dy))


def _decay_rhs(p: GameParams, traj: Trajectory, xl, yl):
    gs = p.g_beta * p.s * np.exp(-p.g_decay * traj.times)
    x, y = traj.x, traj.y
    return (
        x * (1 - x) * (yl * (gs + p.t1 + p.t2) + (p.pi1 - p.pi2)),
        y * (1 - y) * (xl * (p.u2 - p.t1 - gs) + p.t2 * (1 - xl)),
    )


def detect_convergence(
    traj: Trajectory,
    p: GameParams,
    cfg: IntegratorConfig,
    payoffs: PayoffBimatrix | None = None,
) -> tuple[StrategyState, float] | None:
    """First grid time from which the right-hand side stays below tolerance to t_end.

    The quiet stretch must also last at least ``convergence_window``. Returns
    the final state and that time, or None.
    """
    quiet = rhs_norms(traj, p, cfg, payoffs) < cfg.convergence_tol
    loud = np.flatnonzero(~quiet)
    start = int(loud[-1]) + 1 if loud.size else 0
    if start >= len(traj):
        return None
    # tolerate round-off in k*dt when comparing the span with the window
    if traj.times[-1] - traj.times[start] < cfg.convergence_window * (1 - 1e-12):
        return None
    return traj.final, float(traj.times[start])
