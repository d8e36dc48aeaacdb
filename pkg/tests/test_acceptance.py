"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that pytest prints in an
"acceptance criteria" section of the terminal summary.
"""

import csv
import json
import math
import time

import numpy as np
import pytest

from subsidy_game import (
    DemandParams,
    GameParams,
    IntegratorConfig,
    Scenario,
    StrategyState,
    SweepSpec,
    basin_map,
    build_bimatrix,
    classify,
    combination_label,
    company_replicator,
    expected_payoffs,
    government_replicator,
    indifference_point,
    integrate,
    integrate_delayed,
    run_sweep,
    utility_new,
    utility_traditional,
)
from subsidy_game.cli import main

from conftest import BASELINE_INIT, SUBSIDY_GRID, baseline_game

SEED = 20231016


def _random_game(rng) -> GameParams:
    return GameParams(
        u1=rng.uniform(-5, 5), u2=rng.uniform(-5, 5), u3=rng.uniform(-5, 5), t=rng.uniform(0, 5),
        t1=rng.uniform(0, 5), t2=rng.uniform(0, 5), s=rng.uniform(0, 5), g_beta=rng.uniform(0, 1),
        pi1=rng.uniform(-5, 5), pi2=rng.uniform(-5, 5),
    )


def _combination4_game(rng) -> GameParams:
    pi2 = rng.uniform(0, 2)
    g, s, t1 = rng.uniform(0.5, 1), rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5)
    return GameParams(
        u2=g * s + t1 - rng.uniform(0.5, 1.5), t1=t1, t2=rng.uniform(0.1, 1), s=s, g_beta=g,
        pi1=pi2 + rng.uniform(0.5, 2), pi2=pi2,
    )


@pytest.fixture(scope="module")
def subsidy_sweep():
    base = Scenario("subsidy", baseline_game(), BASELINE_INIT, IntegratorConfig(dt=0.01, t_end=100.0))
    return run_sweep(SweepSpec(base, "s", list(SUBSIDY_GRID)))


def test_criterion_1_subsidy_runs_converge_to_adopt_no_subsidy(acceptance_report):
    cfg = IntegratorConfig(dt=0.01, t_end=100.0)
    worst_x = worst_y = slowest = 0.0
    for s in SUBSIDY_GRID:
        start = time.perf_counter()
        traj = integrate(baseline_game(s=s), BASELINE_INIT, cfg)
        slowest = max(slowest, time.perf_counter() - start)
        worst_x = max(worst_x, abs(traj.x[-1] - 1.0))
        worst_y = max(worst_y, abs(traj.y[-1]))
    ok = worst_x < 1e-3 and worst_y < 1e-3 and slowest < 1.0
    acceptance_report(1, ok, f"max|x-1|={worst_x:.3g} max|y|={worst_y:.3g} slowest run {slowest:.3f}s")
    assert ok


def test_criterion_2_government_spread_exceeds_company(subsidy_sweep, acceptance_report):
    sens = subsidy_sweep.sensitivity
    margin = sens.spread_government - sens.spread_company
    ok = margin >= 0.01
    acceptance_report(
        2, ok, f"spread_government={sens.spread_government:.4f} spread_company={sens.spread_company:.4f} margin={margin:.4f}"
    )
    assert ok


def test_criterion_3_replicators_match_bimatrix(acceptance_report):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        p = _random_game(rng)
        state = StrategyState(rng.uniform(), rng.uniform())
        e = expected_payoffs(build_bimatrix(p), state)
        dx = state.x * (1 - state.x) * (e.E11 - e.E12)
        dy = state.y * (1 - state.y) * (e.E21 - e.E22)
        worst = max(worst, abs(company_replicator(state, p) - dx), abs(government_replicator(state, p) - dy))
    ok = worst <= 1e-12
    acceptance_report(3, ok, f"max deviation over 1000 samples {worst:.3g}")
    assert ok


def test_criterion_4_payoff_shift_leaves_trajectories_unchanged(acceptance_report):
    rng = np.random.default_rng(SEED + 1)
    cfg = IntegratorConfig(dt=0.01, t_end=100.0)
    worst = 0.0
    games = [baseline_game()] + [_combination4_game(rng) for _ in range(3)] + [_random_game(rng) for _ in range(2)]
    for p in games:
        init = StrategyState(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))
        table = build_bimatrix(p)
        ref = integrate(p, init, cfg, payoffs=table)
        for company, government in ((rng.uniform(-10, 10), 0.0), (0.0, rng.uniform(-10, 10)),
                                    (rng.uniform(-10, 10), rng.uniform(-10, 10))):
            shifted = integrate(p, init, cfg, payoffs=table.shifted(company, government))
            worst = max(worst, np.max(np.abs(shifted.x - ref.x)), np.max(np.abs(shifted.y - ref.y)))
    ok = worst <= 1e-12
    acceptance_report(4, ok, f"max sample change {worst:.3g} over {len(games)} games x 3 shifts")
    assert ok


def test_criterion_5_basins_agree_with_stability(acceptance_report):
    rng = np.random.default_rng(SEED + 2)
    games = [baseline_game()] + [_combination4_game(rng) for _ in range(5)]
    problems = []
    for k, p in enumerate(games):
        assert combination_label(p) == 4
        labels = basin_map(Scenario(f"set{k}", p, StrategyState(0.5, 0.5), IntegratorConfig()), 10)
        for row in labels:
            for label in row:
                if label == "none":
                    problems.append(f"set{k}: unconverged cell")
                    continue
                cx, cy = (float(v) for v in label.strip("()").split(","))
                if not classify(StrategyState(cx, cy), p).is_ess:
                    problems.append(f"set{k}: converged to non-ESS corner {label}")
    ok = not problems
    acceptance_report(5, ok, f"{len(games)} parameter sets x 100 cells, problems: {problems[:3] or 'none'}")
    assert ok


def test_criterion_6_rk4_fourth_order(acceptance_report):
    p = baseline_game()
    ref = integrate(p, BASELINE_INIT, IntegratorConfig(dt=1e-4, t_end=10.0))
    errs = []
    for dt in (0.02, 0.01):
        traj = integrate(p, BASELINE_INIT, IntegratorConfig(dt=dt, t_end=10.0))
        errs.append(max(abs(traj.x[-1] - ref.x[-1]), abs(traj.y[-1] - ref.y[-1])))
    slope = math.log2(errs[0] / errs[1])
    ok = 3.5 <= slope <= 4.5
    acceptance_report(6, ok, f"errors {errs[0]:.3g} -> {errs[1]:.3g}, log2 ratio {slope:.3f}")
    assert ok


def test_criterion_7_delay_contracts(acceptance_report):
    p = baseline_game()
    taus = (0.04, 0.02, 0.01)
    deviations = []
    in_box = True
    for tau in taus:
        plain = integrate(p, BASELINE_INIT, IntegratorConfig(dt=tau, t_end=5.0))
        delayed = integrate_delayed(p, BASELINE_INIT, IntegratorConfig(dt=tau, t_end=5.0, tau=tau))
        deviations.append(max(abs(delayed.x[-1] - plain.x[-1]), abs(delayed.y[-1] - plain.y[-1])))
        in_box &= bool(delayed.x.min() >= 0 and delayed.x.max() <= 1 and delayed.y.min() >= 0 and delayed.y.max() <= 1)
    ratios = [a / b for a, b in zip(deviations, deviations[1:])]

    corners_fixed = True
    for tau in taus + (0.5, 1.0):
        for cx in (0.0, 1.0):
            for cy in (0.0, 1.0):
                traj = integrate_delayed(p, StrategyState(cx, cy), IntegratorConfig(dt=0.01, t_end=20.0, tau=tau))
                corners_fixed &= bool(np.all(traj.x == cx) and np.all(traj.y == cy))
                in_box &= bool(traj.x.min() >= 0 and traj.x.max() <= 1)

    ok = all(r >= 2.0 for r in ratios) and corners_fixed and in_box
    acceptance_report(
        7, ok,
        f"deviations {[f'{d:.3g}' for d in deviations]}, halving ratios {[f'{r:.3f}' for r in ratios]}, "
        f"corners fixed={corners_fixed}, in [0,1]^2={in_box}",
    )
    assert ok


def test_criterion_8_hotelling_identity(acceptance_report):
    sym = DemandParams(T=1.3, V1=2.0, V2=2.0, p1=0.7, p2=0.7, q=0.4, e1=0.25, e2=0.25, P1=2, P2=2, C1=1, C2=1)
    sym_ok = indifference_point(sym)[1] == 0.5

    rng = np.random.default_rng(SEED + 3)
    worst_identity = worst_mode_gap = 0.0
    interior = 0
    while interior < 1000:
        V = rng.uniform(-5, 5)
        p = DemandParams(
            T=rng.uniform(0.1, 5), V1=V, V2=V, p1=rng.uniform(0, 5), p2=rng.uniform(0, 5),
            q=rng.uniform(0, 3), e1=rng.uniform(-2, 2), e2=rng.uniform(-2, 2), h1=rng.uniform(0, 2),
            mu1=rng.uniform(0, 2), P1=rng.uniform(0, 5), P2=rng.uniform(0, 5), C1=rng.uniform(0, 5), C2=rng.uniform(0, 5),
        )
        raw, _ = indifference_point(p, "corrected")
        verbatim, _ = indifference_point(p, "paper-verbatim")
        worst_mode_gap = max(worst_mode_gap, abs((raw - verbatim) - 1.0))
        if 0.0 <= raw <= 1.0:
            interior += 1
            worst_identity = max(worst_identity, abs(utility_new(p, raw) - utility_traditional(p, raw)))
    # "exactly 1" holds in exact arithmetic; the float subtraction is allowed the same 1e-12
    ok = sym_ok and worst_identity < 1e-12 and worst_mode_gap <= 1e-12
    acceptance_report(
        8, ok,
        f"symmetric x*=0.5: {sym_ok}, max|U1-U2|={worst_identity:.3g} over 1000 interior draws, "
        f"max|gap-1|={worst_mode_gap:.3g}",
    )
    assert ok


def test_criterion_9_cli_contract(tmp_path, acceptance_report):
    config = tmp_path / "subsidy.json"
    config.write_text(json.dumps({
        "game": {"u2": 0.5, "t1": 1.0, "g_beta": 1.0, "t2": 0.5, "pi1": 3.0, "pi2": 2.0, "s": 0.5},
        "init": {"x": 0.2, "y": 0.8},
        "integrator": {"dt": 0.01, "t_end": 100.0},
    }))
    out = tmp_path / "sweep"
    code = main(["sweep", str(config), "--param", "s", "--values", "0.5,0.75,1,1.25,1.5", "--out", str(out)])
    files = sorted(out.glob("*.csv"))
    headers_ok = rows_ok = True
    for f in files:
        with open(f, newline="") as fh:
            table = list(csv.reader(fh))
        headers_ok &= table[0] == ["t", "x_company", "y_government"]
        rows_ok &= len(table) - 1 == math.floor(100.0 / 0.01) + 1
    summary = json.loads((out / "sensitivity.json").read_text())
    sensitivity_ok = summary["spread_government"] - summary["spread_company"] >= 0.01

    bad_dt = tmp_path / "bad_dt.json"
    bad_dt.write_text(json.dumps({**json.loads(config.read_text()), "integrator": {"dt": 0.0}}))
    typo = tmp_path / "typo.json"
    typo.write_text(json.dumps({"game": {"u2": 0.5, "t_1": 1.0}}))
    invalid_codes = []
    for cfg_path, argv_tail, target in (
        (bad_dt, ["--out", str(tmp_path / "a.csv")], tmp_path / "a.csv"),
        (typo, ["--out", str(tmp_path / "b.csv")], tmp_path / "b.csv"),
    ):
        invalid_codes.append((main(["simulate", str(cfg_path), *argv_tail]), target.exists()))
    sweep_bad = main(["sweep", str(bad_dt), "--param", "s", "--values", "0.5,1", "--out", str(tmp_path / "c")])
    invalid_codes.append((sweep_bad, (tmp_path / "c").exists()))
    invalid_ok = all(code_ == 2 and not exists for code_, exists in invalid_codes)

    ok = code == 0 and len(files) == 5 and headers_ok and rows_ok and sensitivity_ok and invalid_ok
    acceptance_report(
        9, ok,
        f"exit {code}, {len(files)} CSVs, headers={headers_ok}, rows={rows_ok}, "
        f"sensitivity margin ok={sensitivity_ok}, invalid configs -> {invalid_codes}",
    )
    assert ok
