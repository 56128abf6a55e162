import numpy as np
import pytest

from reinsim import (
    MarketParams,
    PsiContext,
    TimeGrid,
    evp,
    baseline_claims,
    baseline_factor,
    vp,
)
from reinsim.factor import constant

ZETA1 = np.e + 1.0
LAMBDA1 = 0.1 * np.exp(0.5)


@pytest.fixture(scope="session")
def market():
    return MarketParams(r=0.05, eta=0.5, T=5.0, c=constant(1.0), R0=1.0)


@pytest.fixture(scope="session")
def claims():
    return baseline_claims()


@pytest.fixture(scope="session")
def factor():
    return baseline_factor()


@pytest.fixture(scope="session")
def evp_ctx(market, claims):
    return PsiContext(evp(0.1), claims, market)


@pytest.fixture(scope="session")
def vp_ctx(market, claims):
    return PsiContext(vp(0.1), claims, market)


@pytest.fixture(scope="session")
def grid():
    return TimeGrid(0.0, 5.0, 500)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
