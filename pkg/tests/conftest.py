import numpy as np
import pytest

from muskat import Grid, PhysicalParams


@pytest.fixture
def grid():
    return Grid(128, 2 * np.pi)


@pytest.fixture
def params():
    return PhysicalParams(rho1=0.5, rho2=1.0, rho3=1.5, c_inf=1.0)
