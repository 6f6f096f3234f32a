import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from baryminimax.barycentric import BarycentricRational, SupportPoints

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_rational(rng, n, ell=0, t=None):
    """Random type (n, n) rational with well-separated complex support points."""
    if t is None:
        t = 3 * crandn(rng, n + 1)
    t = np.asarray(t, dtype=complex)
    return BarycentricRational(
        SupportPoints(t[:ell], t[ell:]),
        crandn(rng, ell),
        crandn(rng, n + 1 - ell),
        crandn(rng, n + 1),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_dual_instance(rng, n, ell, m):
    """Random complex samples, support points and interior simplex weights."""
    from baryminimax.barycentric import SampleSet
    from baryminimax.dual import build_basis

    x = crandn(rng, m)
    f = crandn(rng, m)
    t = crandn(rng, n + 1)
    y = crandn(rng, ell)
    w = rng.random(m) + 0.05
    w /= w.sum()
    s = SampleSet(x, f)
    basis = build_basis(s, SupportPoints(t[:ell], t[ell:]), y)
    return s, basis, w
