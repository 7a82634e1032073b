import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ptframe.prob import Distribution, ShannonChannel, Universe

settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def named_universe(m: int) -> Universe:
    return Universe.named([f"x{i + 1}" for i in range(m)])


def random_distribution(rng, universe: Universe, positive: bool = True) -> Distribution:
    w = rng.dirichlet(np.ones(len(universe)))
    if not positive:
        w[rng.random(len(universe)) < 0.3] = 0.0
        if w.sum() == 0:
            w[0] = 1.0
    return Distribution(universe, w / w.sum(), renormalize=True)


def random_channel(rng, universe: Universe, n_labels: int) -> ShannonChannel:
    cols = rng.dirichlet(np.ones(n_labels), size=len(universe)).T
    return ShannonChannel(universe, tuple(f"y{j + 1}" for j in range(n_labels)), cols)


@st.composite
def masses(draw, min_size=2, max_size=8, allow_zero=True):
    m = draw(st.integers(min_size, max_size))
    lo = 0.0 if allow_zero else 1e-3
    w = np.array(draw(st.lists(st.floats(lo, 1.0), min_size=m, max_size=m)))
    w[w < 1e-9] = 0.0  # keep clear of subnormal masses
    if w.sum() <= 0:
        w[0] = 1.0
    return w / w.sum()


@st.composite
def truth_values(draw, size):
    return np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=size, max_size=size)))


# acceptance criteria report: filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        title, ok, detail = ACCEPTANCE_RESULTS[n]
        line = f"AC{n:>2} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
