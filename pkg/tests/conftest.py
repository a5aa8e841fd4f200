import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_spectrum(rng, n, lo=0.2, hi=3.0, gap=0.05):
    """Strictly ordered negative potentials with a minimum relative spacing."""
    while True:
        mu = np.sort(-rng.uniform(lo, hi, n))
        if n == 1 or np.min(np.diff(mu)) > gap:
            return tuple(mu)


def random_weights(rng, n, lo=0.2, hi=5.0):
    return tuple(rng.uniform(lo, hi, n) * rng.choice([-1.0, 1.0], n))


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdicts, one line per criterion."""
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
