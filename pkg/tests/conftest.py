from __future__ import annotations

import numpy as np
import pytest

from partmig.model import BevertonHolt, Constant, IsolatedSpec, SingleEggSpec, TwoEggSpec

C = Constant
BH = BevertonHolt


def isolated(ts, fs):
    rules = tuple(Constant(float(t)) if isinstance(t, (int, float)) else t for t in ts)
    return IsolatedSpec(rules, tuple(float(f) for f in fs))


@pytest.fixture
def migrant():
    # R0 = 0.5*3 + 0.5*0.4/0.8*10 = 4
    return isolated((0.5, 0.4, 0.2), (3, 10))


@pytest.fixture
def resident():
    # R0 = 0.25*2/0.8 = 0.625
    return isolated((0.25, 0.2), (2,))


@pytest.fixture
def small_pair():
    """The n = m = 2 constant pair used in the assembly examples."""
    return isolated((0.5, 0.5), (2,)), isolated((0.25, 0.2), (2,))


@pytest.fixture
def bh_growth():
    return isolated((BH(0.5, 1.0), BH(0.5, 1.0)), (8,))


@pytest.fixture
def bh_decline():
    return isolated((BH(0.5, 1.0), BH(0.5, 1.0)), (0.8,))


@pytest.fixture
def bh_single(bh_growth):
    mig = isolated((BH(0.5, 1.0), BH(0.6, 0.5), BH(0.3, 1.0)), (2, 12))
    res = isolated((BH(0.4, 1.0), BH(0.5, 0.8)), (3,))
    return SingleEggSpec(mig, res, 0.4)


@pytest.fixture
def bh_two(bh_single):
    return TwoEggSpec(bh_single.migrant, bh_single.resident, 0.7, 0.6)


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


# one PASS/FAIL line per acceptance criterion, printed at the end of the run
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
