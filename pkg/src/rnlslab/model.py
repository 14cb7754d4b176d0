"""Physical parameters, potentials, rotation operators, energies, regimes.

The nonlinearity is the pure power mu*|u|^{p-1}u, so the energy density is
G(|u|^2) = (2*mu/(p+1))*|u|^{p+1}.  In 2D the rotation convention is
x_perp = (x2, -x1); in 3D x_perp = (x2, -x1, 0).  Both are pinned by the
vortex expectation <L_A psi_m, psi_m> = -m*Omega.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, GridError
from .field import ComplexField, GridSpec, gradient_arrays, integrate

AMPLITUDE_SCALE = "amplitude"
MASS_SCALE = "mass"


@dataclass(frozen=True)
class PhysParams:
    """Dimension, nonlinearity, coupling, rotation speeds and trap strengths.

    gamma entries are signed: gamma_j < 0 means the trap is repulsive along
    axis j (the potential picks up sgn(gamma_j)).  c0 is the nonlinearity
    bound constant entering the threshold mass (c0 = |mu| for pure power).
    """

    d: int
    p: float
    mu: float = 0.0
    omega: tuple[float, ...] = ()
    gamma: tuple[float, ...] = ()
    c0: float = 1.0
    scale_convention: str = AMPLITUDE_SCALE

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ConfigError(f"dimension must be 1, 2 or 3, got {self.d}")
        if not self.p > 1:
            raise ConfigError(f"nonlinearity exponent must exceed 1, got {self.p}")
        omega = tuple(float(o) for o in (self.omega if not np.isscalar(self.omega) else (self.omega,)))
        gamma = tuple(float(g) for g in (self.gamma if not np.isscalar(self.gamma) else (self.gamma,)))
        if not gamma:
            gamma = (0.0,) * self.d
        if len(gamma) != self.d:
            raise ConfigError(f"gamma needs {self.d} entries, got {len(gamma)}")
        n_blocks = self.d // 2
        if not omega:
            omega = (0.0,) * n_blocks
        if len(omega) != n_blocks:
            raise ConfigError(f"omega needs {n_blocks} entries for d={self.d}, got {len(omega)}")
        if not self.c0 > 0:
            raise ConfigError(f"c0 must be positive, got {self.c0}")
        if self.scale_convention not in (AMPLITUDE_SCALE, MASS_SCALE):
            raise ConfigError(f"unknown scale convention {self.scale_convention!r}")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "gamma", gamma)


@dataclass
class EnergyBreakdown:
    """kinetic = 1/2 int |grad u|^2, potential = int V|u|^2,
    rotation = Re <L_A u, u>, nonlinear = int G(|u|^2)."""

    kinetic: float
    potential: float
    rotation: float
    nonlinear: float

    @property
    def total(self) -> float:
        return self.kinetic + self.potential + self.rotation + self.nonlinear

    def as_dict(self) -> dict:
        return {
            "kinetic": self.kinetic,
            "potential": self.potential,
            "rotation": self.rotation,
            "nonlinear": self.nonlinear,
            "total": self.total,
        }


def build_potential(params: PhysParams, grid: GridSpec) -> np.ndarray:
    """V(x) = 1/2 sum_j sgn(gamma_j) gamma_j^2 x_j^2, pointwise on the grid."""
    if grid.d != params.d:
        raise GridError(f"grid dimension {grid.d} != params dimension {params.d}")
    V = np.zeros(grid.shape)
    for j, g in enumerate(params.gamma):
        if g != 0.0:
            V = V + (0.5 * np.sign(g) * g * g) * grid.coord(j) ** 2
    return V


def rotation_matrix(params: PhysParams) -> np.ndarray:
    """Block-diagonal skew matrix with Omega_j * [[0,-1],[1,0]] blocks.

    Odd dimension appends a zero row/column.
    """
    if params.d < 2:
        raise ConfigError("rotation needs d >= 2")
    M = np.zeros((params.d, params.d))
    for j, om in enumerate(params.omega):
        i = 2 * j
        M[i, i + 1] = -om
        M[i + 1, i] = om
    return M


def vector_potential(params: PhysParams, grid: GridSpec) -> list[np.ndarray]:
    """Components of A = Mx, each broadcastable over the grid."""
    M = rotation_matrix(params)
    comps = []
    for j in range(params.d):
        Aj = np.zeros((1,) * grid.d)
        for l in range(params.d):
            if M[j, l] != 0.0:
                Aj = Aj + M[j, l] * grid.coord(l)
        comps.append(Aj)
    return comps


def apply_rotation(psi: ComplexField, params: PhysParams, check_resolution: bool = True) -> ComplexField:
    """L_A psi = i (Mx) . grad psi, with the gradient spectral."""
    if params.d < 2:
        raise ConfigError("rotation needs d >= 2")
    if check_resolution:
        _warn_if_unresolved(psi)
    out = rotation_arrays(psi.values, psi.grid, params)
    return ComplexField(psi.grid, out)


def rotation_arrays(values: np.ndarray, grid: GridSpec, params: PhysParams) -> np.ndarray:
    """Raw-array L_A application (no resolution check)."""
    grads = gradient_arrays(values, grid)
    A = vector_potential(params, grid)
    out = np.zeros(grid.shape, dtype=np.complex128)
    for Aj, gj in zip(A, grads):
        out += Aj * gj
    return 1j * out


def _warn_if_unresolved(psi: ComplexField, threshold: float = 0.01):
    from .field import spectral_tail_fraction

    tail = spectral_tail_fraction(psi.values, psi.grid)
    if tail > threshold:
        warnings.warn(
            f"field has spectral tail fraction {tail:.3g} > {threshold}; "
            "derivatives may be unreliable",
            stacklevel=3,
        )


def nonlinear_energy_density(absq: np.ndarray, params: PhysParams) -> np.ndarray:
    """G(|u|^2) = (2*mu/(p+1)) * |u|^{p+1} pointwise."""
    if params.mu == 0.0:
        return np.zeros_like(absq)
    return (2.0 * params.mu / (params.p + 1.0)) * absq ** ((params.p + 1.0) / 2.0)


def nonlinear_derivative(absq: np.ndarray, params: PhysParams) -> np.ndarray:
    """G'(|u|^2) = mu * |u|^{p-1}; multiplies u in the Euler-Lagrange flow."""
    if params.mu == 0.0:
        return np.zeros_like(absq)
    if params.p == 3.0:
        return params.mu * absq
    return params.mu * absq ** ((params.p - 1.0) / 2.0)


def energy_breakdown(psi: ComplexField, params: PhysParams, check_resolution: bool = False) -> EnergyBreakdown:
    """Energy components of the rotational functional for the field."""
    grid = psi.grid
    if check_resolution:
        _warn_if_unresolved(psi)
    absq = psi.values.real**2 + psi.values.imag**2
    grads = gradient_arrays(psi.values, grid)
    kinetic = 0.5 * sum(
        float(np.sum(g.real**2 + g.imag**2)) for g in grads
    ) * grid.cell_volume
    V = build_potential(params, grid)
    potential = float(np.sum(V * absq)) * grid.cell_volume
    rotation = 0.0
    if params.d >= 2 and any(om != 0.0 for om in params.omega):
        A = vector_potential(params, grid)
        la = np.zeros(grid.shape, dtype=np.complex128)
        for Aj, gj in zip(A, grads):
            la += Aj * gj
        la *= 1j
        rot = complex(np.sum(np.conj(psi.values) * la)) * grid.cell_volume
        scale = max(abs(rot), kinetic + 1e-300)
        if abs(rot.imag) > 1e-10 * scale:
            warnings.warn(
                f"rotation energy has imaginary part {rot.imag:.3g} "
                f"(magnitude {abs(rot):.3g}); field may be unresolved",
                stacklevel=2,
            )
        rotation = rot.real
    nonlinear = float(np.sum(nonlinear_energy_density(absq, params))) * grid.cell_volume
    return EnergyBreakdown(kinetic=kinetic, potential=potential, rotation=rotation, nonlinear=nonlinear)


def gauge_transform(u: ComplexField, C: np.ndarray) -> ComplexField:
    """Multiply by exp(i*omega) with omega(x) = x . A(x/2) = 1/2 x^T C x."""
    C = np.asarray(C, dtype=float)
    grid = u.grid
    if C.shape != (grid.d, grid.d):
        raise ConfigError(f"gauge matrix must be {grid.d}x{grid.d}, got {C.shape}")
    omega = np.zeros(grid.shape)
    for j in range(grid.d):
        for l in range(grid.d):
            if C[j, l] != 0.0:
                omega = omega + (0.5 * C[j, l]) * grid.coord(j) * grid.coord(l)
    return ComplexField(grid, np.exp(1j * omega) * u.values)


EXISTENCE = "existence"
NON_EXISTENCE = "non-existence"
BOUNDARY = "boundary"


@dataclass(frozen=True)
class RegimeVerdict:
    kind: str
    reason: str | None = None
    detail: str = ""

    def __str__(self):
        if self.kind == NON_EXISTENCE:
            return f"NonExistence({self.reason}): {self.detail}"
        return self.kind.capitalize() + (f": {self.detail}" if self.detail else "")


def classify_regime(params: PhysParams) -> RegimeVerdict:
    """Existence / non-existence of energy minimizers at fixed mass.

    Non-existence clause (a): some |Omega_k| exceeds the smaller trap
    strength of its coordinate pair; clause (b): some gamma_j < 0.
    Equality cases and vanishing gamma with the rest admissible are left
    open and reported as boundary.
    """
    gamma = params.gamma
    omega = params.omega
    for k, om in enumerate(omega):
        g1, g2 = gamma[2 * k], gamma[2 * k + 1]
        if g1 > 0 and g2 > 0 and abs(om) > min(g1, g2):
            return RegimeVerdict(
                NON_EXISTENCE,
                "a",
                f"|Omega_{k + 1}|={abs(om):g} > min(gamma_{2 * k + 1}, gamma_{2 * k + 2})={min(g1, g2):g}",
            )
    for j, g in enumerate(gamma):
        if g < 0:
            return RegimeVerdict(NON_EXISTENCE, "b", f"gamma_{j + 1}={g:g} < 0")
    if all(g > 0 for g in gamma) and all(
        abs(om) < min(gamma[2 * k], gamma[2 * k + 1]) for k, om in enumerate(omega)
    ):
        return RegimeVerdict(EXISTENCE)
    return RegimeVerdict(BOUNDARY, detail="equality or vanishing-trap case, left open")


def threshold_mass(params: PhysParams, q0_mass: float) -> float:
    """Mass-constraint threshold c0^{-d/4} * ||Q_0||_2 (q0_mass is the L2 norm)."""
    if not q0_mass > 0:
        raise ConfigError("q0_mass must be positive")
    if not params.c0 > 0:
        raise ConfigError("c0 must be positive")
    return params.c0 ** (-params.d / 4.0) * q0_mass
