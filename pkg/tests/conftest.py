import pytest

from quasiavg.synth import SynthConfig, generate_market

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def market():
    """100-asset, 50-period synthetic market (stocks twice as volatile)."""
    table, universe = generate_market(SynthConfig(seed=11, n_days=1001))
    return table, universe


@pytest.fixture(scope="session")
def small_market():
    table, universe = generate_market(
        SynthConfig(seed=5, n_stocks=6, n_etfs=4, n_days=301)
    )
    return table, universe


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
