import numpy as np
import pytest

from rnlslab import PhysParams, lift_to_grid, make_grid, shoot_radial
from rnlslab import kernels

SQRT2 = np.sqrt(2.0)


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    # compile the jitted kernels once so timed tests measure the algorithm
    kernels.shoot_classify(2.0, 3.0, 2, 1e-3, 1.0)
    w = np.ones((4, 4), dtype=np.complex128)
    kernels.nonlinear_phase(w, np.zeros((4, 4)), -1e-3, 2.0)


@pytest.fixture(scope="session")
def townes_profile():
    """Free profile for d=2, p=3, with extent covering the default grid."""
    return shoot_radial(d=2, p=3, r_max=25.0)


@pytest.fixture(scope="session")
def grid2d():
    return make_grid(2, 15.0, 256)


@pytest.fixture(scope="session")
def q0_field(townes_profile, grid2d):
    return lift_to_grid(townes_profile, grid2d, 1.0)


@pytest.fixture(scope="session")
def free_params():
    return PhysParams(d=2, p=3.0, mu=-1.0, omega=(0.0,), gamma=(0.0, 0.0))
