"""Vortex trial families and their closed-form linear energies.

Four variants (gamma below means the trap strengths from params):

* iso2d: unit-mass r^{|m|} Gaussian ring with winding phase, gamma_1 =
  gamma_2 = gamma; kinetic/potential/rotation are exactly
  (|m|+1)gamma, (|m|+1)gamma/2, -m*Omega (gradient-squared convention
  for the first; the breakdown stores half of it).
* iso3d: the 2D ring times a Gaussian in x_3.
* aniso3d: x_1^{|m|} e^{-gamma(x)/2} e^{i m theta}; the kinetic closed
  form is an upper bound (the angular term is estimated), potential and
  rotation are exact.
* repulsive3d: x_j0^{|m|} e^{-gamma~(x)/2} along a repulsive axis
  (gamma_j0 < 0), real-valued, vanishing rotation term; envelope uses
  |gamma_j| (and 1 on axes with gamma_j = 0).

The nonlinear component has no trustworthy closed form and is always
filled by grid quadrature.  Moments reduce to
int y^{2n} e^{-a y^2} dy = Gamma(n+1/2) / a^{n+1/2}.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConfigError, RegimeMismatchError, UnresolvedError
from .field import ComplexField, GridSpec, integrate, make_grid, mass
from .model import (
    NON_EXISTENCE,
    EnergyBreakdown,
    PhysParams,
    classify_regime,
    energy_breakdown,
    nonlinear_energy_density,
)

ISO2D = "iso2d"
ISO3D = "iso3d"
ANISO3D = "aniso3d"
REPULSIVE3D = "repulsive3d"

SWEEP_COLUMNS = (
    "m",
    "kinetic",
    "potential",
    "rotation",
    "nonlinear",
    "total",
    "closed_kinetic",
    "closed_potential",
    "closed_rotation",
)


@dataclass(frozen=True)
class VortexSpec:
    variant: str
    m: int
    params: PhysParams
    j0: int | None = None

    def __post_init__(self):
        gamma = self.params.gamma
        if self.variant == ISO2D:
            if self.params.d != 2 or gamma[0] != gamma[1] or gamma[0] <= 0:
                raise ConfigError("iso2d needs d=2 and gamma_1 = gamma_2 > 0")
        elif self.variant == ISO3D:
            if self.params.d != 3 or len(set(gamma)) != 1 or gamma[0] <= 0:
                raise ConfigError("iso3d needs d=3 and equal positive gammas")
        elif self.variant == ANISO3D:
            if self.params.d != 3 or any(g <= 0 for g in gamma):
                raise ConfigError("aniso3d needs d=3 and all gammas positive")
            if gamma[0] > gamma[1]:
                raise ConfigError("aniso3d convention: gamma_1 = min(gamma_1, gamma_2)")
            if abs(self.m) < 1:
                raise ConfigError("aniso3d closed forms need |m| >= 1")
        elif self.variant == REPULSIVE3D:
            if self.params.d != 3:
                raise ConfigError("repulsive3d needs d=3")
            j0 = self.vortex_axis
            if gamma[j0] >= 0:
                raise ConfigError(f"repulsive3d needs gamma_{j0 + 1} < 0")
            if abs(self.m) < 1:
                raise ConfigError("repulsive3d closed forms need |m| >= 1")
        else:
            raise ConfigError(f"unknown vortex variant {self.variant!r}")

    @property
    def vortex_axis(self) -> int:
        if self.variant != REPULSIVE3D:
            return 0
        if self.j0 is not None:
            return self.j0
        for j, g in enumerate(self.params.gamma):
            if g < 0:
                return j
        raise ConfigError("repulsive3d needs some gamma_j < 0")

    @property
    def envelope(self) -> tuple[float, ...]:
        """Quadratic envelope coefficients a_j (exp(-a_j x_j^2 / 2))."""
        gamma = self.params.gamma
        if self.variant in (ISO2D, ISO3D, ANISO3D):
            return tuple(gamma)
        return tuple(abs(g) if g != 0.0 else 1.0 for g in gamma)


def _log_norm_const(spec: VortexSpec) -> float:
    """log C_m for the variant's normalizer (unit L2 mass)."""
    m = abs(spec.m)
    a = spec.envelope
    if spec.variant == ISO2D:
        g = a[0]
        return 0.5 * ((m + 1.0) * np.log(g) - np.log(np.pi) - gammaln(m + 1.0))
    if spec.variant == ISO3D:
        g = a[0]
        return 0.5 * ((m + 1.0) * np.log(g) - np.log(np.pi) - gammaln(m + 1.0)) + 0.25 * np.log(
            g / np.pi
        )
    # power axis carries Gamma(m+1/2)/a0^{m+1/2}; the others sqrt(pi/a_j)
    j0 = spec.vortex_axis
    a0 = a[j0]
    log_c2 = (m + 0.5) * np.log(a0) - gammaln(m + 0.5)
    for j, aj in enumerate(a):
        if j != j0:
            log_c2 += 0.5 * np.log(aj / np.pi)
    return 0.5 * log_c2


def default_vortex_grid(spec: VortexSpec, m_max: int | None = None) -> GridSpec:
    m_ref = abs(spec.m) if m_max is None else m_max
    a_min = min(spec.envelope)
    L = max(15.0, 3.0 * np.sqrt(max(m_ref, 1) / a_min))
    if spec.params.d == 2:
        return make_grid(2, L, 256)
    return make_grid(3, L, 128)


def make_vortex(spec: VortexSpec, grid: GridSpec) -> ComplexField:
    """Unit-mass trial field per the variant's formula."""
    if grid.d != spec.params.d:
        raise ConfigError("grid/vortex dimension mismatch")
    m = abs(spec.m)
    a = spec.envelope
    expo = np.zeros(grid.shape)
    for j, aj in enumerate(a):
        expo = expo + (0.5 * aj) * grid.coord(j) ** 2
    log_c = _log_norm_const(spec)

    if spec.variant in (ISO2D, ISO3D):
        rho_sq = grid.coord(0) ** 2 + grid.coord(1) ** 2
        if m == 0:
            values = np.exp(log_c - expo).astype(np.complex128) + np.zeros(grid.shape)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                amp = np.exp(log_c + 0.5 * m * np.log(rho_sq) - expo)
            amp = np.where(rho_sq > 0, amp, 0.0)
            theta = np.arctan2(grid.coord(1), grid.coord(0)) + np.zeros(grid.shape)
            values = amp * np.exp(1j * spec.m * theta)
    elif spec.variant == ANISO3D:
        x1 = grid.coord(0) + np.zeros(grid.shape)
        values = np.exp(log_c - expo) * x1**m
        theta = np.arctan2(grid.coord(1), grid.coord(0)) + np.zeros(grid.shape)
        values = values * np.exp(1j * spec.m * theta)
    else:
        xj = grid.coord(spec.vortex_axis) + np.zeros(grid.shape)
        values = (np.exp(log_c - expo) * xj**m).astype(np.complex128)

    out = ComplexField(grid, values)
    m_grid = mass(out)
    if abs(m_grid - 1.0) > 1e-6:
        raise UnresolvedError(
            f"vortex m={spec.m} not resolved on this grid: mass {m_grid:.8f} != 1"
        )
    return out


def closed_form_energy(spec: VortexSpec, grid: GridSpec | None = None) -> EnergyBreakdown:
    """Analytic linear components; nonlinear filled by grid quadrature.

    For aniso3d the kinetic entry is the paper-style upper bound; all
    other entries (and all entries of the other variants) are exact.
    """
    m = abs(spec.m)
    msign = spec.m
    params = spec.params
    gamma = params.gamma
    omega = params.omega[0] if params.omega else 0.0

    if spec.variant in (ISO2D, ISO3D):
        g = gamma[0]
        grad_sq = (m + 1.0) * g
        potential = 0.5 * (m + 1.0) * g
        if spec.variant == ISO3D:
            grad_sq += 0.5 * g
            potential += 0.25 * g
        rotation = -msign * omega
    elif spec.variant == ANISO3D:
        g1, g2, g3 = gamma
        grad_sq = (g1 * m * m + m * g1 - 0.25 * g1) / (m - 0.5) + 0.5 * (g2 + g3)
        potential = 0.5 * g1 * m + 0.25 * (g1 + g2 + g3)
        rotation = -msign * omega
    else:
        a = spec.envelope
        j0 = spec.vortex_axis
        a0 = a[j0]
        grad_sq = a0 * (m - 0.25) / (m - 0.5)
        potential = 0.5 * np.sign(gamma[j0]) * gamma[j0] ** 2 * (m + 0.5) / a0
        for j, aj in enumerate(a):
            if j != j0:
                grad_sq += 0.5 * aj
                if gamma[j] != 0.0:
                    potential += 0.25 * np.sign(gamma[j]) * gamma[j] ** 2 / aj
        potential = float(potential)
        rotation = 0.0

    if grid is None:
        grid = default_vortex_grid(spec)
    psi = make_vortex(spec, grid)
    absq = psi.values.real**2 + psi.values.imag**2
    nonlinear = float(integrate(nonlinear_energy_density(absq, params), grid))

    return EnergyBreakdown(
        kinetic=0.5 * float(grad_sq),
        potential=float(potential),
        rotation=float(rotation),
        nonlinear=nonlinear,
    )


def aniso3d_grad_sq_bound(m: int, gamma) -> float:
    """The kinetic upper bound on int |grad psi_m|^2 for the anisotropic family."""
    g1, g2, g3 = gamma
    m = abs(m)
    if m < 1:
        raise ConfigError("bound needs |m| >= 1")
    return (g1 * m * m + m * g1 - 0.25 * g1) / (m - 0.5) + 0.5 * (g2 + g3)


@dataclass
class VortexReport:
    m: int
    closed_form: EnergyBreakdown
    quadrature: EnergyBreakdown
    bound_slope: float
    kinetic_is_bound: bool


def quadrature_energy(spec: VortexSpec, grid: GridSpec, params: PhysParams | None = None) -> EnergyBreakdown:
    """Independent grid-quadrature oracle for the closed forms."""
    if params is None:
        params = spec.params
    return energy_breakdown(make_vortex(spec, grid), params)


def vortex_report(spec: VortexSpec, grid: GridSpec | None = None) -> VortexReport:
    if grid is None:
        grid = default_vortex_grid(spec)
    closed = closed_form_energy(spec, grid)
    quad = quadrature_energy(spec, grid)
    return VortexReport(
        m=spec.m,
        closed_form=closed,
        quadrature=quad,
        bound_slope=_leading_slope(spec),
        kinetic_is_bound=spec.variant == ANISO3D,
    )


def _leading_slope(spec: VortexSpec) -> float:
    omega = spec.params.omega[0] if spec.params.omega else 0.0
    gamma = spec.params.gamma
    if spec.variant in (ISO2D, ISO3D):
        return gamma[0] - abs(omega)
    if spec.variant == ANISO3D:
        return gamma[0] - abs(omega)
    return -0.5 * spec.envelope[spec.vortex_axis]


def divergence_sweep(
    variant: str,
    params: PhysParams,
    m_range=range(1, 21),
    grid: GridSpec | None = None,
    fit_from: int | None = None,
) -> dict:
    """Total trial energy over m, with a linear fit of the leading slope.

    Requires the non-existence regime; the winding sign follows sgn(Omega)
    where the rotation term matters.
    """
    verdict = classify_regime(params)
    if verdict.kind != NON_EXISTENCE:
        raise RegimeMismatchError(
            f"divergence sweep needs the non-existence regime, got {verdict}"
        )
    ms = sorted(abs(int(m)) for m in m_range)
    if not ms or ms[0] < 1:
        raise ConfigError("m_range must contain integers >= 1")
    omega = params.omega[0] if params.omega else 0.0
    sign = 1 if omega >= 0 else -1
    if variant == REPULSIVE3D:
        sign = 1

    spec0 = VortexSpec(variant, sign * ms[-1], params)
    if grid is None:
        grid = default_vortex_grid(spec0, m_max=ms[-1])

    rows = []
    for m in ms:
        spec = VortexSpec(variant, sign * m, params)
        closed = closed_form_energy(spec, grid)
        quad = quadrature_energy(spec, grid)
        rows.append(
            {
                "m": sign * m,
                "kinetic": quad.kinetic,
                "potential": quad.potential,
                "rotation": quad.rotation,
                "nonlinear": quad.nonlinear,
                "total": quad.total,
                "closed_kinetic": closed.kinetic,
                "closed_potential": closed.potential,
                "closed_rotation": closed.rotation,
            }
        )

    if fit_from is None:
        fit_from = ms[len(ms) // 2]
    fit_rows = [r for r, m in zip(rows, ms) if m >= fit_from]
    if len(fit_rows) < 2:
        raise ConfigError("not enough points above fit_from for the slope fit")
    xs = np.array([abs(r["m"]) for r in fit_rows], dtype=float)
    ys = np.array([r["total"] for r in fit_rows])
    slope, intercept = np.polyfit(xs, ys, 1)
    return {
        "rows": rows,
        "slope": float(slope),
        "intercept": float(intercept),
        "fit_from": fit_from,
        "expected_slope": _leading_slope(spec0),
    }


def write_sweep_csv(path, sweep: dict) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for row in sweep["rows"]:
            writer.writerow(
                [row["m"]] + [f"{row[c]:.12e}" for c in SWEEP_COLUMNS[1:]]
            )
