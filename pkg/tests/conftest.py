import numpy as np
import pytest

from apnls.grid import ComplexField, RealVectorField, make_grid
from apnls.hydro import HydroState
from apnls.spectral import scalar_gradient


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_complex(grid, rng):
    z = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return ComplexField(grid, z)


def smooth_periodic_state(J, eps, dim=1):
    """Fully periodic smooth (a, v = grad phi, phi) data on [-0.5, 1.5]^dim.

    Unlike the log-cosh catalog data this has no derivative kink at the
    periodic seam, so spectral-consistency properties hold to round-off.
    """
    bounds = [(-0.5, 1.5)] * dim
    grid = make_grid(dim, bounds if dim > 1 else bounds[0], J)
    mesh = grid.node_mesh()
    if dim == 1:
        (x,) = mesh
        a0 = 0.8 + 0.2 * np.cos(np.pi * (x - 0.5))
        phi0 = 0.1 * np.cos(np.pi * (x - 0.5))
    else:
        x, y = mesh
        a0 = 0.8 + 0.2 * np.cos(np.pi * (x - 0.5)) * np.cos(np.pi * (y - 0.5))
        phi0 = 0.1 * np.cos(np.pi * (x - 0.5)) + 0.1 * np.cos(np.pi * (y - 0.5))
    v0 = scalar_gradient(grid, phi0)
    state = HydroState(
        a=ComplexField(grid, a0.astype(complex)),
        v=RealVectorField(grid, v0),
        t=0.0,
        eps=eps,
        phi=phi0,
    )
    return grid, state
