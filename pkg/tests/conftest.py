import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from depchoice import fixtures
from depchoice.sampling import random_dsc

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@st.composite
def dscs(draw, max_size=6):
    n = draw(st.integers(min_value=0, max_value=max_size))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    density = draw(st.sampled_from([0.2, 0.4, 0.7]))
    return random_dsc(n, random.Random(seed), density=density)


def fixture_pool():
    return [make() for make in fixtures.ALL.values()]


@pytest.fixture
def e1():
    return fixtures.a_b_or_c()


@pytest.fixture
def e2():
    return fixtures.a_b_and_c()


@pytest.fixture
def e3():
    return fixtures.a_b_c_b()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
