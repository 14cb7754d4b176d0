"""Ground states: free profile by radial shooting, trapped/rotating by
mass-normalized gradient flow.

Shooting solves u'' + ((d-1)/r) u' = 2(u - |u|^{p-1}u) with u(0)=a,
u'(0)=0 and bisects a on the overshoot/undershoot dichotomy.  Raw shot
trajectories leave the decaying branch once the bisection error is
amplified by ~exp(sqrt(2) r), so below ``patch_at`` the profile is
continued with the matched linearized tail A r^{-(d-1)/2} exp(-sqrt(2) r).

The gradient flow is a backward-Euler spectral step on the kinetic part
with the trap, nonlinearity and rotation explicit, renormalized to the
mass sphere after every step.  Two shifts are applied on top of the plain
iteration: the current chemical-potential estimate (which makes the exact
constrained critical point a fixed point of the map, so the Euler-Lagrange
residual can be driven to tolerance instead of plateauing at O(dtau^2)),
and a stabilization offset alpha ~ max(V)/2 (which keeps the explicit trap
term stable on wide grids).  Both vanish from the fixed-point equation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft
from scipy.interpolate import PchipInterpolator

from . import kernels
from .errors import BracketError, ConfigError, GridError, NonConvergenceError, ShootingError
from .field import ComplexField, GridSpec, gradient_arrays, integrate, mass
from .model import (
    EXISTENCE,
    EnergyBreakdown,
    PhysParams,
    build_potential,
    classify_regime,
    energy_breakdown,
    nonlinear_derivative,
    rotation_arrays,
    threshold_mass,
    vector_potential,
)

_SPHERE_AREA = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}


@dataclass
class RadialProfile:
    """Positive decreasing radial profile u(r) on a uniform r-grid."""

    d: int
    p: float
    r: np.ndarray
    u: np.ndarray
    h: float
    r_max: float
    center_value: float
    mass: float

    def interpolator(self):
        return PchipInterpolator(self.r, self.u, extrapolate=False)


@dataclass
class GroundState:
    """Converged minimizer with chemical potential and EL residual."""

    field: ComplexField
    lam: float
    residual: float
    energy: EnergyBreakdown
    iterations: int
    target_mass: float
    init_kind: str = "gaussian"
    converged: bool = True


def _max_exponent(d: int, p: float) -> float:
    return np.inf if d <= 2 else 1.0 + 4.0 / (d - 2.0)


def shoot_radial(
    d: int,
    p: float,
    a_lo: float = 0.5,
    a_hi: float = 4.0,
    tol: float = 1e-12,
    h: float = 1e-4,
    r_max: float = 20.0,
    patch_at: float = 1e-3,
) -> RadialProfile:
    """Bisect the center value of the positive decaying radial solution."""
    if not 1.0 < p < _max_exponent(d, p):
        raise ConfigError(f"exponent p={p} outside (1, 1+4/(d-2)) for d={d}")
    if not 0 < a_lo < a_hi:
        raise BracketError(f"need 0 < a_lo < a_hi, got [{a_lo}, {a_hi}]")

    def classify(a):
        event, _ = kernels.shoot_classify(a, p, d, h, r_max)
        if event == kernels.EVENT_NONE:
            raise ShootingError(
                f"no dichotomy event by r_max={r_max} for a={a}; "
                "increase r_max or refine the step"
            )
        return event

    lo_event = classify(a_lo)
    hi_event = classify(a_hi)
    if lo_event != kernels.EVENT_TURNED_UP or hi_event != kernels.EVENT_CROSSED_ZERO:
        raise BracketError(
            f"bracket [{a_lo}, {a_hi}] does not straddle the decaying solution "
            f"(events {lo_event}, {hi_event})"
        )
    lo, hi = float(a_lo), float(a_hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if classify(mid) == kernels.EVENT_CROSSED_ZERO:
            hi = mid
        else:
            lo = mid
    a = 0.5 * (lo + hi)

    _, u = kernels.shoot_profile(a, p, d, h, r_max)
    r_full = h * np.arange(int(round(r_max / h)) + 1)
    return _patched_profile(d, p, a, u, r_full, h, r_max, patch_at)


def _patched_profile(d, p, a, u, r_full, h, r_max, patch_at) -> RadialProfile:
    """Splice the linearized decay onto the shot trajectory at u ~ patch_at."""
    below = np.nonzero(u < patch_at)[0]
    if below.size == 0:
        raise ShootingError(
            f"profile never decayed below {patch_at}; r_max={r_max} too small"
        )
    i_m = int(below[0])
    if i_m < 2 or u[i_m - 1] <= u[i_m]:
        raise ShootingError("profile not decreasing at the patch point")
    u_out = np.empty_like(r_full)
    u_out[: i_m + 1] = u[: i_m + 1]
    r_m = r_full[i_m]
    nu = 0.5 * (d - 1)
    amp = u[i_m] * r_m**nu * np.exp(np.sqrt(2.0) * r_m)
    tail_r = r_full[i_m + 1 :]
    u_out[i_m + 1 :] = amp * tail_r ** (-nu) * np.exp(-np.sqrt(2.0) * tail_r)

    diffs = np.diff(u_out)
    decreasing_until = u_out[1:] < 1e-12
    if np.any((diffs >= 0) & ~decreasing_until):
        raise ShootingError("patched profile is not strictly decreasing")
    if u_out[-1] >= 1e-10:
        raise ShootingError(f"profile tail u(r_max)={u_out[-1]:.3g} >= 1e-10")

    m = _SPHERE_AREA[d] * np.trapezoid(u_out**2 * r_full ** (d - 1), dx=h)
    return RadialProfile(
        d=d, p=p, r=r_full, u=u_out, h=h, r_max=r_max, center_value=a, mass=float(m)
    )


def lift_to_grid(profile: RadialProfile, grid: GridSpec, c: float = 1.0) -> ComplexField:
    """Pointwise c*u(|x|) via monotone cubic interpolation in r."""
    if grid.d != profile.d:
        raise GridError(f"grid dimension {grid.d} != profile dimension {profile.d}")
    r_need = float(np.sqrt(sum(L**2 for L in grid.half_width)))
    if r_need > profile.r_max:
        raise GridError(
            f"grid corner radius {r_need:.3f} exceeds profile extent {profile.r_max}"
        )
    if c == 0.0:
        return ComplexField(grid, np.zeros(grid.shape, dtype=np.complex128))
    rr = np.sqrt(grid.radius_sq())
    values = c * profile.interpolator()(rr)
    return ComplexField(grid, values.astype(np.complex128))


def _default_init(grid: GridSpec, params: PhysParams, kind: str, vortex_m: int) -> np.ndarray:
    widths = [abs(g) if g != 0.0 else 0.5 for g in params.gamma]
    expo = np.zeros(grid.shape)
    for j, w in enumerate(widths):
        expo = expo + (0.5 * w) * grid.coord(j) ** 2
    values = np.exp(-expo).astype(np.complex128)
    if kind == "vortex":
        if grid.d < 2:
            raise ConfigError("vortex seed needs d >= 2")
        zsign = 1.0 if (not params.omega or params.omega[0] >= 0) else -1.0
        values = values * (grid.coord(0) + zsign * 1j * grid.coord(1)) ** abs(vortex_m)
    elif kind != "gaussian":
        raise ConfigError(f"unknown init kind {kind!r}")
    return values


def rayleigh_lambda(phi: ComplexField, params: PhysParams) -> float:
    """Multiplier estimate lambda = -<H phi + G' phi, phi> / ||phi||^2."""
    grid = phi.grid
    hphi = _apply_h_plus_nonlinear(phi.values, grid, params)
    num = float(np.real(np.sum(np.conj(phi.values) * hphi))) * grid.cell_volume
    return -num / mass(phi)


def _apply_h_plus_nonlinear(values: np.ndarray, grid: GridSpec, params: PhysParams) -> np.ndarray:
    vhat = sfft.fftn(values)
    kin = sfft.ifftn(0.5 * grid.ksq() * vhat)
    V = build_potential(params, grid)
    absq = values.real**2 + values.imag**2
    out = kin + (V + nonlinear_derivative(absq, params)) * values
    if params.d >= 2 and any(om != 0.0 for om in params.omega):
        out += rotation_arrays(values, grid, params)
    return out


def el_residual(phi: ComplexField, lam: float, params: PhysParams) -> float:
    """|| -1/2 lap phi + V phi + G' phi + L_A phi + lam phi ||_2 / ||phi||_2."""
    nrm = np.sqrt(mass(phi))
    if nrm == 0.0:
        raise ConfigError("el_residual of the zero field")
    res = _apply_h_plus_nonlinear(phi.values, phi.grid, params) + lam * phi.values
    return float(np.sqrt(np.sum(res.real**2 + res.imag**2) * phi.grid.cell_volume)) / nrm


def gradient_flow(
    params: PhysParams,
    grid: GridSpec,
    c: float = 1.0,
    init: ComplexField | None = None,
    dtau: float = 0.01,
    tol: float = 1e-6,
    max_iter: int = 50000,
    q0_norm: float | None = None,
    init_kind: str = "gaussian",
    vortex_m: int = 1,
    residual_every: int = 10,
    energy_every: int = 10,
    energy_trace: list | None = None,
) -> GroundState:
    """Minimize the energy on the mass sphere ||phi||_2 = c.

    energy_trace, if given, collects the total energy after every
    renormalized step (slows the flow down; meant for diagnostics).
    """
    verdict = classify_regime(params)
    if verdict.kind != EXISTENCE:
        warnings.warn(
            f"regime is {verdict}; the flow may not converge (no minimizer)",
            stacklevel=2,
        )
    if params.mu != 0.0 and q0_norm is not None and c >= threshold_mass(params, q0_norm):
        warnings.warn(
            f"target norm c={c:g} at or above the threshold "
            f"{threshold_mass(params, q0_norm):g}; minimizer may not exist",
            stacklevel=2,
        )

    if init is not None:
        if init.grid != grid:
            raise GridError("init field lives on a different grid")
        phi = init.values.astype(np.complex128, copy=True)
        init_kind = "user"
    else:
        phi = _default_init(grid, params, init_kind, vortex_m)

    target_mass = c * c
    cell = grid.cell_volume
    nrm = np.sqrt(np.sum(phi.real**2 + phi.imag**2) * cell)
    if nrm == 0.0:
        raise ConfigError("initial field is identically zero")
    phi *= c / nrm

    V = build_potential(params, grid)
    alpha = 0.5 * (float(V.max()) + float(V.min()))
    ksq = grid.ksq()
    denom = 1.0 + dtau * (0.5 * ksq + alpha)
    rotating = params.d >= 2 and any(om != 0.0 for om in params.omega)

    phi_hat = sfft.fftn(phi)
    best_res = np.inf
    best_phi = phi.copy()
    best_lam = 0.0
    energy_prev = np.inf
    rise_run = 0
    iterations = 0
    lam = 0.0

    for it in range(max_iter + 1):
        absq = phi.real**2 + phi.imag**2
        wloc = (V + nonlinear_derivative(absq, params)) * phi
        if rotating:
            grads = [sfft.ifftn(1j * grid.kgrid(j) * phi_hat) for j in range(grid.d)]
            rot = np.zeros(grid.shape, dtype=np.complex128)
            for Aj, gj in zip(vector_potential(params, grid), grads):
                rot += Aj * gj
            rot *= 1j
            wloc = wloc + rot
        kin_e = 0.5 * float(np.sum(ksq * (phi_hat.real**2 + phi_hat.imag**2))) * cell / grid.size
        lam = -(kin_e + float(np.real(np.sum(np.conj(phi) * wloc))) * cell) / target_mass

        if it % residual_every == 0 or it == max_iter:
            hphi = sfft.ifftn(0.5 * ksq * phi_hat) + wloc
            res_vec = hphi + lam * phi
            res = float(
                np.sqrt(np.sum(res_vec.real**2 + res_vec.imag**2) * cell)
            ) / c
            if res < best_res:
                best_res = res
                best_phi = phi.copy()
                best_lam = lam
            if res < tol:
                iterations = it
                field = ComplexField(grid, phi)
                return GroundState(
                    field=field,
                    lam=lam,
                    residual=res,
                    energy=energy_breakdown(field, params),
                    iterations=iterations,
                    target_mass=target_mass,
                    init_kind=init_kind,
                )

        if it == max_iter:
            break

        rhs = (1.0 + dtau * (alpha - lam)) * phi - dtau * wloc
        phi_hat = sfft.fftn(rhs)
        phi_hat /= denom
        phi = sfft.ifftn(phi_hat)
        nrm = np.sqrt(np.sum(phi.real**2 + phi.imag**2) * cell)
        scale = c / nrm
        phi *= scale
        phi_hat *= scale

        if energy_trace is not None:
            energy_trace.append(energy_breakdown(ComplexField(grid, phi), params).total)
        if (it + 1) % energy_every == 0:
            e_now = energy_breakdown(ComplexField(grid, phi), params).total
            if e_now > energy_prev + 1e-12 * abs(energy_prev):
                rise_run += energy_every
            else:
                rise_run = 0
            energy_prev = e_now
            if rise_run >= 50:
                field = ComplexField(grid, best_phi)
                raise NonConvergenceError(
                    f"energy increased over {rise_run} consecutive steps "
                    f"(residual {best_res:.3g}); flow diverging",
                    best=GroundState(
                        field=field,
                        lam=best_lam,
                        residual=best_res,
                        energy=energy_breakdown(field, params),
                        iterations=it + 1,
                        target_mass=target_mass,
                        init_kind=init_kind,
                        converged=False,
                    ),
                )

    field = ComplexField(grid, best_phi)
    raise NonConvergenceError(
        f"no convergence to {tol:g} within {max_iter} iterations "
        f"(best residual {best_res:.3g})",
        best=GroundState(
            field=field,
            lam=best_lam,
            residual=best_res,
            energy=energy_breakdown(field, params),
            iterations=max_iter,
            target_mass=target_mass,
            init_kind=init_kind,
            converged=False,
        ),
    )


def regrid(field: ComplexField, grid: GridSpec) -> ComplexField:
    """Cubic interpolation of a field onto another grid (zero outside).

    Used to lift ground states solved on tight trap-sized grids onto the
    wider evolution grid; tails must have decayed on the source grid.
    """
    from scipy.interpolate import RegularGridInterpolator

    src = field.grid
    if src.d != grid.d:
        raise GridError("regrid needs matching dimensions")
    if src == grid:
        return field.copy()
    axes = [src.axis(j) for j in range(src.d)]
    mesh = np.meshgrid(*[grid.axis(j) for j in range(grid.d)], indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    out = np.zeros(grid.size, dtype=np.complex128)
    inside = np.ones(grid.size, dtype=bool)
    for j in range(src.d):
        inside &= (pts[:, j] >= axes[j][0]) & (pts[:, j] <= axes[j][-1])
    for part in ("real", "imag"):
        interp = RegularGridInterpolator(
            axes, getattr(field.values, part), method="cubic", bounds_error=False, fill_value=0.0
        )
        comp = np.zeros(grid.size)
        comp[inside] = interp(pts[inside])
        out += comp if part == "real" else 1j * comp
    return ComplexField(grid, out.reshape(grid.shape))
