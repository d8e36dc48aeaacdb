"""CSV / JSON serialization of trajectories.

Floats are written with ``repr`` (shortest round-trip form), so reading a
file back reproduces every number bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .dynamics import Trajectory
from .game import StrategyState

CSV_HEADER = ("t", "x_company", "y_government")


def write_csv(traj: Trajectory, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for t, x, y in zip(traj.times.tolist(), traj.x.tolist(), traj.y.tolist()):
            writer.writerow((repr(t), repr(x), repr(y)))


def read_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        rows = [tuple(float(v) for v in row) for row in reader]
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def _state(s: StrategyState | None):
    return None if s is None else {"x_company": s.x, "y_government": s.y}


def trajectory_to_dict(traj: Trajectory) -> dict:
    return {
        "times": traj.times.tolist(),
        "x_company": traj.x.tolist(),
        "y_government": traj.y.tolist(),
        "converged_to": _state(traj.converged_to),
        "convergence_time": traj.convergence_time,
        "max_overshoot": traj.max_overshoot,
        "dt": traj.dt,
        "tau": traj.tau,
    }


def trajectory_from_dict(doc: dict) -> Trajectory:
    conv = doc.get("converged_to")
    return Trajectory(
        times=np.asarray(doc["times"], dtype=float),
        x=np.asarray(doc["x_company"], dtype=float),
        y=np.asarray(doc["y_government"], dtype=float),
        converged_to=None if conv is None else StrategyState(conv["x_company"], conv["y_government"]),
        convergence_time=doc.get("convergence_time"),
        max_overshoot=doc.get("max_overshoot", 0.0),
        dt=doc.get("dt", 0.0),
        tau=doc.get("tau", 0.0),
    )


def write_json(traj: Trajectory, path: str | Path) -> None:
    Path(path).write_text(json.dumps(trajectory_to_dict(traj)))


def read_json(path: str | Path) -> Trajectory:
    return trajectory_from_dict(json.loads(Path(path).read_text()))
