import pytest

from logspec.potentials import PotentialSpec
from logspec.schrodinger import auto_grid, solve_spectrum


@pytest.fixture(scope="session")
def log600():
    """600 levels of the logarithmic potential (epsilon0 = 1, wall at x0 = 1).

    The most expensive solver run in the suite; shared across test modules.
    """
    p = PotentialSpec("logarithmic", epsilon0=1.0, x0=1.0)
    return solve_spectrum(p, auto_grid(p, 600, rel_tol=1e-3), 600)
