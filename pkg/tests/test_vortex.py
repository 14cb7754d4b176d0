import numpy as np
import pytest

from rnlslab import PhysParams, closed_form_energy, divergence_sweep, make_grid, make_vortex, quadrature_energy
from rnlslab.errors import ConfigError, RegimeMismatchError
from rnlslab.field import mass
from rnlslab.vortex import VortexSpec, aniso3d_grad_sq_bound, vortex_report, write_sweep_csv

GRID2D = make_grid(2, 15.0, 256)
GRID3D = make_grid(3, 15.0, 128)


def iso2d(m, gamma=1.0, omega=0.5, mu=-1.0):
    params = PhysParams(d=2, p=3.0, mu=mu, omega=(omega,), gamma=(gamma, gamma))
    return VortexSpec("iso2d", m, params)


def test_unit_mass_all_variants():
    p3 = PhysParams(d=3, p=3.0, mu=-1.0, omega=(0.5,), gamma=(1.0, 2.0, 1.0))
    prep = PhysParams(d=3, p=3.0, mu=-1.0, omega=(0.5,), gamma=(1.0, 1.0, -1.0))
    piso3 = PhysParams(d=3, p=3.0, mu=-1.0, omega=(0.5,), gamma=(1.0, 1.0, 1.0))
    for m in (1, 2, 5, 10):
        assert abs(mass(make_vortex(iso2d(m), GRID2D)) - 1.0) < 1e-8
        assert abs(mass(make_vortex(VortexSpec("aniso3d", m, p3), GRID3D)) - 1.0) < 1e-8
        assert abs(mass(make_vortex(VortexSpec("repulsive3d", m, prep), GRID3D)) - 1.0) < 1e-8
        assert abs(mass(make_vortex(VortexSpec("iso3d", m, piso3), GRID3D)) - 1.0) < 1e-8


def test_iso2d_m0_is_gaussian():
    spec = iso2d(0, gamma=1.0)
    psi = make_vortex(spec, GRID2D)
    expected = np.sqrt(1.0 / np.pi) * np.exp(-GRID2D.radius_sq() / 2)
    assert np.abs(psi.values - expected).max() < 1e-12
    assert np.abs(psi.values.imag).max() == 0.0


def test_iso2d_closed_forms_match_quadrature():
    for m in range(1, 11):
        spec = iso2d(m)
        closed = closed_form_energy(spec, GRID2D)
        quad = quadrature_energy(spec, GRID2D)
        assert abs(quad.kinetic - closed.kinetic) <= 1e-6 * closed.kinetic
        assert abs(quad.potential - closed.potential) <= 1e-6 * closed.potential
        assert abs(quad.rotation - closed.rotation) <= 1e-6 * abs(closed.rotation)


def test_iso2d_closed_form_values():
    closed = closed_form_energy(iso2d(4, gamma=1.0, omega=0.5), GRID2D)
    assert np.isclose(closed.kinetic, 2.5)
    assert np.isclose(closed.potential, 2.5)
    assert np.isclose(closed.rotation, -2.0)


def test_iso3d_closed_forms_match_quadrature():
    params = PhysParams(d=3, p=3.0, mu=-1.0, omega=(0.5,), gamma=(1.0, 1.0, 1.0))
    for m in (1, 3):
        spec = VortexSpec("iso3d", m, params)
        closed = closed_form_energy(spec, GRID3D)
        quad = quadrature_energy(spec, GRID3D)
        assert abs(quad.kinetic - closed.kinetic) <= 1e-6 * closed.kinetic
        assert abs(quad.potential - closed.potential) <= 1e-6 * closed.potential
        assert abs(quad.rotation - closed.rotation) <= 1e-6 * abs(closed.rotation)


def test_repulsive3d_closed_forms():
    params = PhysParams(d=3, p=3.0, mu=-1.0, omega=(0.7,), gamma=(1.0, 1.0, -1.0))
    spec = VortexSpec("repulsive3d", 5, params)
    closed = closed_form_energy(spec, GRID3D)
    assert closed.rotation == 0.0
    assert np.isclose(closed.potential, -2.25)
    quad = quadrature_energy(spec, GRID3D)
    assert abs(quad.rotation) <= 1e-10
    assert abs(quad.kinetic - closed.kinetic) <= 1e-6 * closed.kinetic
    assert abs(quad.potential - closed.potential) <= 1e-6 * abs(closed.potential)


def test_repulsive3d_other_axes():
    # gamma_1 < 0 and gamma_2 < 0 variants use the same moment identities
    for j0, gamma in ((0, (-2.0, 1.0, 1.0)), (1, (1.0, -1.5, 1.0))):
        params = PhysParams(d=3, p=3.0, mu=-1.0, omega=(0.3,), gamma=gamma)
        spec = VortexSpec("repulsive3d", 3, params)
        assert spec.vortex_axis == j0
        closed = closed_form_energy(spec, GRID3D)
        quad = quadrature_energy(spec, GRID3D)
        assert abs(quad.kinetic - closed.kinetic) <= 1e-6 * closed.kinetic
        assert abs(quad.potential - closed.potential) <= 1e-6 * abs(closed.potential)
        assert abs(quad.rotation) <= 1e-10


def test_repulsive3d_zero_gamma_axis():
    params = PhysParams(d=3, p=3.0, mu=-1.0, omega=(0.3,), gamma=(-1.0, 0.0, 1.0))
    spec = VortexSpec("repulsive3d", 4, params)
    psi = make_vortex(spec, GRID3D)
    assert abs(mass(psi) - 1.0) < 1e-8
    closed = closed_form_energy(spec, GRID3D)
    quad = quadrature_energy(spec, GRID3D)
    assert abs(quad.kinetic - closed.kinetic) <= 1e-6 * closed.kinetic


def test_aniso3d_kinetic_bound():
    # the phase factor e^{im theta} carried by x_1^{|m|} has a cusp on the
    # x_3 axis, so gradient-based quadratures converge only algebraically;
    # the potential integrand is smooth and stays spectrally exact
    params = PhysParams(d=3, p=3.0, mu=-1.0, omega=(0.5,), gamma=(1.0, 2.0, 1.0))
    for m in range(1, 11):
        spec = VortexSpec("aniso3d", m, params)
        quad = quadrature_energy(spec, GRID3D)
        bound = 0.5 * aniso3d_grad_sq_bound(m, params.gamma)
        assert quad.kinetic <= bound + 1e-8
        closed = closed_form_energy(spec, GRID3D)
        assert abs(quad.potential - closed.potential) <= 1e-6 * closed.potential
        assert abs(quad.rotation - closed.rotation) <= 1e-3 * abs(closed.rotation)


def test_aniso3d_bound_value():
    assert np.isclose(aniso3d_grad_sq_bound(1, (1.0, 2.0, 3.0)), 6.0)


def test_chirality_flip():
    for m in (1, 4):
        plus = quadrature_energy(iso2d(m), GRID2D)
        minus = quadrature_energy(iso2d(-m), GRID2D)
        assert abs(plus.rotation + minus.rotation) <= 1e-12 * abs(plus.rotation)
        assert abs(plus.kinetic - minus.kinetic) <= 1e-12 * plus.kinetic
        assert abs(plus.potential - minus.potential) <= 1e-12 * plus.potential


def test_variant_validation():
    p2 = PhysParams(d=2, p=3.0, omega=(0.5,), gamma=(1.0, 2.0))
    with pytest.raises(ConfigError):
        VortexSpec("iso2d", 1, p2)  # unequal gammas
    p3 = PhysParams(d=3, p=3.0, omega=(0.5,), gamma=(2.0, 1.0, 1.0))
    with pytest.raises(ConfigError):
        VortexSpec("aniso3d", 1, p3)  # gamma_1 must be the min
    prep = PhysParams(d=3, p=3.0, omega=(0.5,), gamma=(1.0, 1.0, 1.0))
    with pytest.raises(ConfigError):
        VortexSpec("repulsive3d", 1, prep)  # needs a negative gamma
    with pytest.raises(ConfigError):
        VortexSpec("warp", 1, p2)


def test_divergence_sweep_iso2d_slope():
    params = PhysParams(d=2, p=3.0, mu=-1.0, omega=(1.2,), gamma=(1.0, 1.0))
    sweep = divergence_sweep("iso2d", params, m_range=range(1, 21), fit_from=10)
    assert sweep["slope"] < 0
    assert abs(sweep["slope"] - (-0.2)) <= 0.05 * 0.2
    assert sweep["expected_slope"] == pytest.approx(-0.2)


def test_divergence_sweep_regime_mismatch():
    params = PhysParams(d=2, p=3.0, mu=-1.0, omega=(0.5,), gamma=(1.0, 1.0))
    with pytest.raises(RegimeMismatchError):
        divergence_sweep("iso2d", params, m_range=range(1, 5))


def test_divergence_sweep_negative_omega():
    params = PhysParams(d=2, p=3.0, mu=-1.0, omega=(-1.2,), gamma=(1.0, 1.0))
    sweep = divergence_sweep("iso2d", params, m_range=range(1, 13), fit_from=8)
    assert sweep["slope"] < 0
    assert all(r["m"] < 0 for r in sweep["rows"])


def test_sweep_csv_columns(tmp_path):
    params = PhysParams(d=2, p=3.0, mu=-1.0, omega=(1.2,), gamma=(1.0, 1.0))
    sweep = divergence_sweep("iso2d", params, m_range=range(1, 6), fit_from=3)
    path = tmp_path / "sweep.csv"
    write_sweep_csv(path, sweep)
    header = path.read_text().splitlines()[0]
    assert header == "m,kinetic,potential,rotation,nonlinear,total,closed_kinetic,closed_potential,closed_rotation"


def test_vortex_report():
    rep = vortex_report(iso2d(3), GRID2D)
    assert rep.m == 3
    assert not rep.kinetic_is_bound
    assert abs(rep.quadrature.kinetic - rep.closed_form.kinetic) < 1e-6 * rep.closed_form.kinetic
