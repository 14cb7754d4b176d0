"""Numerical verifiers for the magnetic functional inequalities.

check_gn tests the sharp mass-critical Gagliardo-Nirenberg bound with the
sharp constant computed from the shooting module's free-profile norm (never
hard-coded); check_diamagnetic tests that stripping the phase can only
lower magnetic kinetic energy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConfigError
from .field import ComplexField, gradient_arrays, integrate, mass
from .model import PhysParams, rotation_matrix


@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float
    tol: float = 1e-10

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs

    @property
    def satisfied(self) -> bool:
        return self.ratio <= 1.0 + self.tol


def gaussian_moment(n: float, alpha: float) -> float:
    """int y^{2n} exp(-alpha y^2) dy = Gamma(n+1/2) / alpha^{n+1/2}."""
    if not n > -0.5:
        raise ConfigError(f"moment exponent must exceed -1/2, got {n}")
    if not alpha > 0:
        raise ConfigError(f"alpha must be positive, got {alpha}")
    return float(np.exp(gammaln(n + 0.5) - (n + 0.5) * np.log(alpha)))


def sharp_gn_constant(d: int, q0_norm: float) -> float:
    """C_GN = (d+2) / (2 d ||Q||_2^{4/d})."""
    if not q0_norm > 0:
        raise ConfigError("q0_norm must be positive")
    return (d + 2.0) / (2.0 * d * q0_norm ** (4.0 / d))


def _covariant_grad_sq(u: ComplexField, M: np.ndarray | None) -> float:
    grid = u.grid
    grads = gradient_arrays(u.values, grid)
    total = 0.0
    for j in range(grid.d):
        gj = grads[j]
        if M is not None:
            Aj = np.zeros((1,) * grid.d)
            for l in range(grid.d):
                if M[j, l] != 0.0:
                    Aj = Aj + M[j, l] * grid.coord(l)
            gj = gj - 1j * Aj * u.values
        total += float(np.sum(gj.real**2 + gj.imag**2))
    return total * grid.cell_volume


def check_gn(u: ComplexField, params: PhysParams, q0_norm: float, tol: float = 1e-10) -> InequalityReport:
    """||u||_{p+1}^{p+1} <= C_GN ||grad_A u||_2^2 ||u||_2^{4/d} at p = 1+4/d."""
    if abs(params.p - (1.0 + 4.0 / params.d)) > 1e-12:
        raise ConfigError(
            f"sharp GN check needs the mass-critical exponent p=1+4/d, got p={params.p}"
        )
    m = mass(u)
    if m == 0.0:
        raise ConfigError("check_gn of the zero field")
    absq = u.values.real**2 + u.values.imag**2
    p1 = params.p + 1.0
    lhs = float(integrate(absq ** (p1 / 2.0), u.grid))
    M = None
    if params.d >= 2 and any(om != 0.0 for om in params.omega):
        M = rotation_matrix(params)
    rhs = sharp_gn_constant(params.d, q0_norm) * _covariant_grad_sq(u, M) * m ** (2.0 / params.d)
    return InequalityReport(lhs=lhs, rhs=rhs, tol=tol)


def check_diamagnetic(u: ComplexField, M: np.ndarray | None = None, tol: float = 1e-6) -> InequalityReport:
    """||grad |u| ||_2 <= ||(grad - iMx) u||_2.

    |u| has kinks at zeros, so when the field has near-zeros the modulus is
    smoothed to sqrt(|u|^2 + eps^2) with eps = 1e-8 max|u| before spectral
    differentiation; the tolerance absorbs the smoothing gap.
    """
    grid = u.grid
    absq = u.values.real**2 + u.values.imag**2
    peak = float(np.sqrt(absq.max()))
    if peak == 0.0:
        raise ConfigError("check_diamagnetic of the zero field")
    low = float(np.sqrt(absq.min()))
    if low > 1e-10 * peak:
        modulus = np.sqrt(absq)
    else:
        eps = 1e-8 * peak
        modulus = np.sqrt(absq + eps * eps)
    mod_field = ComplexField(grid, modulus.astype(np.complex128))
    lhs_sq = _covariant_grad_sq(mod_field, None)
    if M is not None:
        M = np.asarray(M, dtype=float)
        if not np.allclose(M, -M.T):
            raise ConfigError("diamagnetic check expects a skew-symmetric matrix")
    rhs_sq = _covariant_grad_sq(u, M)
    return InequalityReport(lhs=float(np.sqrt(lhs_sq)), rhs=float(np.sqrt(rhs_sq)), tol=tol)
