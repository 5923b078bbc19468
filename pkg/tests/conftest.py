import pytest

from physics.eigensolver import Grid
from physics.models import CESParams, ESParams


@pytest.fixture
def worked_es():
    """alpha = 3/2, beta = 4: one bound level at -337/36."""
    return ESParams(1.5, 4.0)


@pytest.fixture
def worked_ces():
    """Dual partner of the worked ES chain; ground level -1."""
    return CESParams(82.0 / 9.0, 8.0)


@pytest.fixture
def box_grid():
    """[0, pi] with Dirichlet ends: continuum levels j^2."""
    return Grid(0.0, 3.141592653589793, 400)


@pytest.fixture
def oscillator_grid():
    return Grid(-12.0, 12.0, 2000)
