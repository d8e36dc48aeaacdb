"""Command-line front end.

Exit codes: 0 success, 2 invalid input or configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
import warnings
from dataclasses import replace
from pathlib import Path

from . import io
from .config import load_config
from .errors import NumericalOvershootError
from .game import StrategyState, combination_label, equilibria
from .hotelling import FormulaMode, market_outcome
from .sweep import (
    SWEEP_PARAMETERS,
    SweepSpec,
    run_scenario,
    run_sweep,
    threshold_report,
    time_to_threshold,
)

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _label(game) -> tuple[int | None, list[str]]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        label = combination_label(game)
    return label, [str(w.message) for w in caught]


def _fmt_state(s: StrategyState | None) -> str:
    return "none" if s is None else f"(x_company={s.x:.6g}, y_government={s.y:.6g})"


def _value_token(v: float) -> str:
    short = format(v, "g")
    return short if float(short) == v else repr(v)


def cmd_simulate(args: argparse.Namespace) -> int:
    doc = load_config(args.config)
    scenario = doc.scenario()
    overrides = {k: getattr(args, k) for k in ("dt", "t_end", "tau") if getattr(args, k) is not None}
    if overrides:
        scenario = replace(scenario, integrator=replace(scenario.integrator, **overrides))
    if args.s is not None:
        scenario = replace(scenario, game=replace(scenario.game, s=args.s))
    if args.init_x is not None or args.init_y is not None:
        init = StrategyState(
            scenario.init.x if args.init_x is None else args.init_x,
            scenario.init.y if args.init_y is None else args.init_y,
        )
        scenario = replace(scenario, init=init)

    traj = run_scenario(scenario)
    if args.format == "json":
        io.write_json(traj, args.out)
    else:
        io.write_csv(traj, args.out)

    label, notes = _label(scenario.resolved_game())
    print(f"converged_to: {_fmt_state(traj.converged_to)}")
    print(f"convergence_time: {traj.convergence_time if traj.convergence_time is not None else 'none'}")
    print(f"final_state: {_fmt_state(traj.final)}")
    print(f"combination: {label if label is not None else 'boundary'}")
    for note in notes:
        print(f"notice: {note}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    doc = load_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"--values must be a comma-separated list of numbers, got {args.values!r}")
    spec = SweepSpec(doc.scenario(), args.param, values)
    result = run_sweep(spec, workers=args.workers)
    report = threshold_report(result)

    runs = []
    for value, traj in result.runs:
        game = spec.base.with_value(args.param, value).resolved_game()
        label, _ = _label(game)
        runs.append(
            {
                "value": value,
                "file": f"{args.param}_{_value_token(value)}.csv",
                "converged_to": None
                if traj.converged_to is None
                else {"x_company": traj.converged_to.x, "y_government": traj.converged_to.y},
                "convergence_time": traj.convergence_time,
                "time_to_x_0.99": time_to_threshold(traj),
                "combination_label": label,
            }
        )
    summary = {
        "parameter": args.param,
        "spread_government": result.sensitivity.spread_government,
        "spread_company": result.sensitivity.spread_company,
        "adoption_time_report": report,
        "runs": runs,
    }

    # everything is computed; only now touch the filesystem
    out = Path(args.out)
    created_dir = not out.exists()
    written: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for entry, (_, traj) in zip(runs, result.runs):
            path = out / entry["file"]
            io.write_csv(traj, path)
            written.append(path)
        path = out / "sensitivity.json"
        path.write_text(json.dumps(summary, indent=2))
        written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        if created_dir:
            shutil.rmtree(out, ignore_errors=True)
        raise

    print(f"wrote {len(runs)} trajectories and sensitivity.json to {out}")
    print(f"spread_government: {result.sensitivity.spread_government:.6g}")
    print(f"spread_company: {result.sensitivity.spread_company:.6g}")
    return EXIT_OK


def cmd_equilibria(args: argparse.Namespace) -> int:
    doc = load_config(args.config)
    game = doc.scenario().resolved_game()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        eqs = equilibria(game)
        label = combination_label(game)
    notices = [str(w.message) for w in caught]

    if args.format == "json":
        print(
            json.dumps(
                {
                    "combination_label": label,
                    "notices": notices,
                    "equilibria": [
                        {
                            "point": {"x_company": e.point.x, "y_government": e.point.y},
                            "jacobian": [list(row) for row in e.jacobian],
                            "eigenvalues": [{"re": ev.real, "im": ev.imag} for ev in e.eigenvalues],
                            "classification": e.classification.value,
                            "is_interior": e.is_interior,
                        }
                        for e in eqs
                    ],
                },
                indent=2,
            )
        )
        return EXIT_OK

    rows = [("x_company", "y_government", "eigenvalue_1", "eigenvalue_2", "classification")]
    for e in eqs:
        rows.append(
            (
                f"{e.point.x:.6g}",
                f"{e.point.y:.6g}",
                *(f"{ev.real:.6g}{ev.imag:+.6g}j" if ev.imag else f"{ev.real:.6g}" for ev in e.eigenvalues),
                e.classification.value,
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    print(f"combination: {label if label is not None else 'boundary'}")
    for note in notices:
        print(f"notice: {note}")
    return EXIT_OK


def cmd_hotelling(args: argparse.Namespace) -> int:
    doc = load_config(args.config)
    if doc.demand is None:
        raise ValueError("config has no 'demand' section")
    outcome = market_outcome(doc.demand, args.mode)
    fields = {
        "mode": FormulaMode(args.mode).value,
        "x_star_raw": outcome.x_star_raw,
        "x_star": outcome.x_star,
        "share_new": outcome.share_new,
        "share_traditional": outcome.share_traditional,
        "pi1": outcome.pi1,
        "pi2": outcome.pi2,
        "clamped": outcome.clamped,
        "inconvenience_asymmetry": outcome.inconvenience_asymmetry,
    }
    if outcome.clamped:
        print(
            f"warning: indifference point {outcome.x_star_raw!r} outside [0, 1]; clamped to {outcome.x_star!r}",
            file=sys.stderr,
        )
    if args.json:
        print(json.dumps(fields, indent=2))
    else:
        for k, v in fields.items():
            print(f"{k}: {v}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subsidy-game",
        description="Government subsidy vs. company adoption evolutionary game.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("simulate", help="integrate one scenario and write its trajectory", formatter_class=fmt)
    p.add_argument("config", help="JSON scenario document")
    p.add_argument("--s", type=float, help="initial subsidy amount (overrides game.s)")
    p.add_argument("--tau", type=float, help="time delay, a multiple of dt (overrides integrator.tau)")
    p.add_argument("--dt", type=float, help="RK4 step (config default 0.01)")
    p.add_argument("--t-end", dest="t_end", type=float, help="horizon (config default 100)")
    p.add_argument("--init-x", dest="init_x", type=float, help="initial adoption probability")
    p.add_argument("--init-y", dest="init_y", type=float, help="initial subsidy probability")
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="one-parameter sweep with sensitivity summary", formatter_class=fmt)
    p.add_argument("config")
    p.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    p.add_argument("--values", required=True, help="comma-separated values, e.g. 0.5,0.75,1")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("equilibria", help="fixed points with stability classification", formatter_class=fmt)
    p.add_argument("config")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser("hotelling", help="market split and profits from the demand section", formatter_class=fmt)
    p.add_argument("config")
    p.add_argument("--mode", choices=[m.value for m in FormulaMode], default=FormulaMode.CORRECTED.value)
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.set_defaults(func=cmd_hotelling)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NumericalOvershootError, ArithmeticError) as err:
        _err(str(err))
        return EXIT_NUMERICAL
    except (ValueError, OSError) as err:
        _err(str(err))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
