import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mfsor.discretization import ProblemSpec, assemble, nodal_field
from mfsor.grid import build_uniform_grid

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def product(*x):
    return np.prod(np.stack(np.broadcast_arrays(*x)), axis=0)


def model(dim, res, **kw):
    """(stencil, zero start, exact nodal field) of the unit-cube Laplace problem."""
    grid = build_uniform_grid(dim, [res] * dim if np.isscalar(res) else res, [1.0] * dim)
    st = assemble(ProblemSpec(dim, boundary=product, **kw), grid)
    return st, st.initial_field(0.0), nodal_field(product, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
