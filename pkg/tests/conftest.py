import random

import pytest
from hypothesis import HealthCheck, settings

from lie2gerbe.cartan import Form, Space, d
from lie2gerbe.cartan.sampling import SamplerSettings, random_form

settings.register_profile("lie2gerbe", deadline=None, max_examples=15,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("lie2gerbe")

SMALL = SamplerSettings(max_degree=2, max_terms=3)

# verdict lines appended by test_acceptance, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: l.split("criterion ")[1]):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def R3():
    return Space(3)


@pytest.fixture(scope="session")
def T3():
    return Space(3, "trig")


@pytest.fixture(scope="session")
def chi0(R3):
    return Form.basis(R3, (0, 1, 2))


def random_exact_chi(space, seed, degree=3):
    """d of a random 2-form of degree <= ``degree``; redrawn until nonzero."""
    rng = random.Random(seed)
    while True:
        chi = d(random_form(space, 2, rng, SamplerSettings(max_degree=degree)))
        if not chi.iszero():
            return chi


def torus_chi(space):
    """A global trig 3-form with nonzero cohomology class."""
    c = space.trig
    B0 = Form.basis(space, (1, 2), c(0, (0, 1, 0))) + Form.basis(space, (0, 1), c(1, (1, 0, 1)))
    return d(B0) + Form.basis(space, (0, 1, 2))
