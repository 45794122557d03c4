import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from cnotsynth.gf2 import BitMatrix  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def invertible_matrices(draw, min_n=1, max_n=24):
    """Products of random CNOTs, so invertible by construction."""
    n = draw(st.integers(min_n, max_n))
    rows = [1 << i for i in range(n)]
    if n > 1:
        k = draw(st.integers(0, 3 * n * n))
        seed = draw(st.integers(0, 2**32 - 1))
        rng = np.random.default_rng(seed)
        for _ in range(k):
            c, t = rng.choice(n, size=2, replace=False)
            rows[t] ^= rows[c]
    return BitMatrix(n, rows)


@st.composite
def unit_lower_matrices(draw, min_n=1, max_n=24):
    n = draw(st.integers(min_n, max_n))
    rows = []
    for i in range(n):
        below = draw(st.integers(0, (1 << i) - 1)) if i else 0
        rows.append(below | (1 << i))
    return BitMatrix(n, rows)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
