import numpy as np
import pytest

from rnlslab import ComplexField, gradient_spectral, integrate, make_grid, norms
from rnlslab.errors import GridError
from rnlslab.field import grad_norm_sq, mass


def test_make_grid_spacing():
    grid = make_grid(2, 15.0, 256)
    assert grid.spacing == (0.1171875, 0.1171875)
    assert grid.shape == (256, 256)


def test_make_grid_coordinates():
    grid = make_grid(1, 10.0, 8)
    assert np.allclose(grid.axis(0), [-10, -7.5, -5, -2.5, 0, 2.5, 5, 7.5])


def test_make_grid_rejects_odd_points():
    with pytest.raises(GridError):
        make_grid(2, 15.0, 255)


def test_make_grid_rejects_tiny_points():
    with pytest.raises(GridError):
        make_grid(1, 5.0, 4)


def test_make_grid_rejects_bad_half_width():
    with pytest.raises(GridError):
        make_grid(1, -1.0, 64)
    with pytest.raises(GridError):
        make_grid(4, 1.0, 64)


def test_wavenumbers_layout():
    grid = make_grid(1, np.pi, 16)
    k = grid.wavenumbers(0)
    # k = pi*n/L with n in FFT order
    assert k[0] == 0.0
    assert np.isclose(k[1], 1.0)
    assert np.isclose(k.min(), -8.0)
    assert np.isclose(k.max(), 7.0)


def test_gradient_plane_wave():
    grid = make_grid(1, np.pi, 64)
    k = 3.0  # resolved integer mode for L=pi
    x = grid.axis(0)
    u = ComplexField(grid, np.exp(1j * k * x))
    (du,) = gradient_spectral(u)
    assert np.allclose(du.values, 1j * k * u.values, rtol=1e-12, atol=1e-12)


def test_gradient_constant_field():
    grid = make_grid(2, 5.0, 32)
    u = ComplexField(grid, np.full(grid.shape, 2.3 + 0.5j))
    for comp in gradient_spectral(u):
        assert np.abs(comp.values).max() < 1e-13


def test_gradient_gaussian_analytic():
    grid = make_grid(2, 15.0, 256)
    u = ComplexField(grid, np.exp(-grid.radius_sq() / 2).astype(complex))
    g = gradient_spectral(u)
    x0 = grid.coord(0) + np.zeros(grid.shape)
    assert np.abs(g[0].values + x0 * u.values).max() <= 1e-10


def test_gradient_plane_wave_product():
    grid = make_grid(2, np.pi, 64)
    x, y = grid.coord(0), grid.coord(1)
    u = ComplexField(grid, np.exp(1j * (3 * x + 5 * y)) + np.zeros(grid.shape, complex))
    gx, gy = gradient_spectral(u)
    assert np.allclose(gx.values, 3j * u.values, rtol=1e-10)
    assert np.allclose(gy.values, 5j * u.values, rtol=1e-10)


def test_integrate_gaussian_mass():
    # mass of e^{-|x|^2/2} in 2D is the integral of e^{-|x|^2} = pi
    grid = make_grid(2, 15.0, 256)
    u = ComplexField(grid, np.exp(-grid.radius_sq() / 2).astype(complex))
    assert abs(mass(u) - np.pi) < 1e-12


def test_integrate_1d_gaussian():
    grid = make_grid(1, 15.0, 256)
    x = grid.axis(0)
    val = integrate(np.exp(-x * x), grid)
    assert abs(val - np.sqrt(np.pi)) < 1e-12


def test_integrate_linear():
    grid = make_grid(1, 5.0, 64)
    rng = np.random.default_rng(7)
    f = rng.standard_normal(grid.shape)
    g = rng.standard_normal(grid.shape)
    lhs = integrate(2.5 * f - 1.25 * g, grid)
    rhs = 2.5 * integrate(f, grid) - 1.25 * integrate(g, grid)
    assert abs(lhs - rhs) < 1e-13 * max(1.0, abs(rhs))


def test_integrate_vortex_mass():
    from rnlslab import PhysParams, make_vortex
    from rnlslab.vortex import VortexSpec

    params = PhysParams(d=2, p=3.0, mu=-1.0, omega=(0.0,), gamma=(1.0, 1.0))
    spec = VortexSpec("iso2d", 3, params)
    psi = make_vortex(spec, make_grid(2, 15.0, 256))
    assert abs(mass(psi) - 1.0) < 1e-10


def test_norms_zero_field():
    grid = make_grid(2, 10.0, 64)
    from rnlslab import PhysParams

    params = PhysParams(d=2, p=3.0, omega=(0.0,), gamma=(1.0, 1.0))
    n = norms(ComplexField(grid, np.zeros(grid.shape, complex)), params)
    assert n["mass"] == 0.0 and n["grad_norm"] == 0.0 and n["lp_norm"] == 0.0


def test_norms_gaussian():
    grid = make_grid(2, 15.0, 256)
    from rnlslab import PhysParams

    params = PhysParams(d=2, p=3.0, omega=(0.0,), gamma=(0.0, 0.0))
    u = ComplexField(grid, np.exp(-grid.radius_sq() / 2).astype(complex))
    n = norms(u, params)
    assert abs(n["mass"] - np.pi) < 1e-12
    assert abs(n["grad_norm"] ** 2 - np.pi) < 1e-10


def test_norms_townes_mass(q0_field, free_params):
    n = norms(q0_field, free_params)
    assert abs(n["mass"] - 5.85043) / 5.85043 < 0.005


def test_parseval_random_fields():
    grid = make_grid(2, 8.0, 64)
    rng = np.random.default_rng(11)
    for _ in range(10):
        vals = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        u = ComplexField(grid, vals)
        import scipy.fft as sfft

        spec_mass = np.sum(np.abs(sfft.fftn(vals)) ** 2) * grid.cell_volume / grid.size
        assert abs(mass(u) - spec_mass) <= 1e-12 * spec_mass


def test_grad_norm_matches_gradient():
    grid = make_grid(2, 10.0, 128)
    rng = np.random.default_rng(3)
    env = np.exp(-grid.radius_sq() / 8)
    u = ComplexField(grid, env * (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)))
    direct = sum(mass(g) for g in gradient_spectral(u))
    assert abs(grad_norm_sq(u) - direct) <= 1e-10 * direct


def test_field_shape_mismatch():
    grid = make_grid(2, 5.0, 16)
    with pytest.raises(GridError):
        ComplexField(grid, np.zeros((16, 8), complex))
