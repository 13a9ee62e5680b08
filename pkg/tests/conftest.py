import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from finmetric import FiniteMetricSpace
from finmetric.generators import random_graph_metric, random_metric

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> list of (label, ok, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        for label, ok, detail in ACCEPTANCE[key]:
            terminalreporter.write_line(f"criterion {key:>2} {'PASS' if ok else 'FAIL'}  {label}: {detail}")


@st.composite
def planar_spaces(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    coords = draw(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=n, max_size=n))
    p = np.array(coords, dtype=np.float64)
    diff = p[:, None, :] - p[None, :, :]
    return FiniteMetricSpace(np.sqrt((diff * diff).sum(-1)))


@st.composite
def seeded_spaces(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_metric(n, seed)


@st.composite
def graph_spaces(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_graph_metric(n, seed)


def any_space(min_n=1, max_n=7):
    return st.one_of(planar_spaces(min_n, max_n), seeded_spaces(min_n, max_n), graph_spaces(min_n, max_n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
