import pytest

from subsidy_game import GameParams, IntegratorConfig, StrategyState

ACCEPTANCE_LINES = pytest.StashKey[list]()


def baseline_game(s: float = 0.5, **overrides) -> GameParams:
    """Combination-4 parameter block used for the initial-subsidy experiment."""
    params = dict(u2=0.5, t1=1.0, g_beta=1.0, t2=0.5, pi1=3.0, pi2=2.0, s=s)
    params.update(overrides)
    return GameParams(**params)


BASELINE_INIT = StrategyState(0.2, 0.8)
SUBSIDY_GRID = (0.5, 0.75, 1.0, 1.25, 1.5)


@pytest.fixture
def game() -> GameParams:
    return baseline_game()


@pytest.fixture
def cfg() -> IntegratorConfig:
    return IntegratorConfig(dt=0.01, t_end=100.0)


@pytest.fixture(scope="session")
def acceptance_report(request):
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def report(number: int, ok: bool, detail: str) -> None:
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
