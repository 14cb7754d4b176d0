"""Uniform periodic grids, complex fields, spectral calculus, quadrature.

Conventions (documented so the multiplier tables are unambiguous):

* coordinates: x_j = -L_j + i*h_j for i = 0..N_j-1, with h_j = 2 L_j / N_j;
* wavenumbers: k_j = pi*n/L_j for n = -N_j/2 .. N_j/2 - 1, stored in FFT
  layout (``2*pi*fftfreq``);
* transforms: unnormalized forward, 1/prod(N_j) on the inverse
  (NumPy/SciPy "backward" norm).

All operations are pure: fields are treated as immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .errors import GridError

_MIN_POINTS = 8


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic tensor grid on [-L_1, L_1) x ... x [-L_d, L_d)."""

    d: int
    half_width: tuple[float, ...]
    points: tuple[int, ...]

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(2.0 * L / N for L, N in zip(self.half_width, self.points))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis(self, j: int) -> np.ndarray:
        """Coordinate samples along axis j (1-D array)."""
        L, N = self.half_width[j], self.points[j]
        return -L + (2.0 * L / N) * np.arange(N)

    def wavenumbers(self, j: int) -> np.ndarray:
        """Wavenumbers along axis j in FFT layout; k = pi*n/L_j."""
        N, h = self.points[j], self.spacing[j]
        return 2.0 * np.pi * sfft.fftfreq(N, d=h)

    def coord(self, j: int) -> np.ndarray:
        """Coordinate array along axis j, shaped to broadcast over the grid."""
        shape = [1] * self.d
        shape[j] = self.points[j]
        return self.axis(j).reshape(shape)

    def kgrid(self, j: int) -> np.ndarray:
        """Wavenumber array along axis j, shaped to broadcast over the grid."""
        shape = [1] * self.d
        shape[j] = self.points[j]
        return self.wavenumbers(j).reshape(shape)

    def radius_sq(self) -> np.ndarray:
        """|x|^2 on the full grid."""
        out = np.zeros(self.shape)
        for j in range(self.d):
            out = out + self.coord(j) ** 2
        return out

    def ksq(self) -> np.ndarray:
        """|k|^2 on the full grid (FFT layout along every axis)."""
        out = np.zeros(self.shape)
        for j in range(self.d):
            out = out + self.kgrid(j) ** 2
        return out


def make_grid(d: int, half_width, points) -> GridSpec:
    """Build a GridSpec, validating dimension, extents and point counts."""
    if d not in (1, 2, 3):
        raise GridError(f"dimension must be 1, 2 or 3, got {d}")
    if np.isscalar(half_width):
        half_width = (float(half_width),) * d
    else:
        half_width = tuple(float(L) for L in half_width)
    if np.isscalar(points):
        points = (int(points),) * d
    else:
        points = tuple(int(N) for N in points)
    if len(half_width) != d or len(points) != d:
        raise GridError("half_width and points must have one entry per axis")
    for L in half_width:
        if not L > 0:
            raise GridError(f"half_width must be positive, got {L}")
    for N in points:
        if N % 2 != 0:
            raise GridError(f"point count must be even, got {N}")
        if N < _MIN_POINTS:
            raise GridError(f"point count must be >= {_MIN_POINTS}, got {N}")
    return GridSpec(d=d, half_width=half_width, points=points)


@dataclass
class ComplexField:
    """Complex samples on a GridSpec; the discrete wavefunction."""

    grid: GridSpec
    values: np.ndarray
    blown_up: bool = field(default=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != self.grid.shape:
            raise GridError(
                f"values shape {self.values.shape} != grid shape {self.grid.shape}"
            )
        if not self.blown_up and not np.all(np.isfinite(self.values.view(np.float64))):
            raise GridError("field contains non-finite values")

    def copy(self) -> "ComplexField":
        return ComplexField(self.grid, self.values.copy(), self.blown_up)


def zero_field(grid: GridSpec) -> ComplexField:
    return ComplexField(grid, np.zeros(grid.shape, dtype=np.complex128))


def gradient_spectral(u: ComplexField) -> list[ComplexField]:
    """Spectral partial derivatives: component j is ifft((i k_j) * fft(u))."""
    out = []
    for j in range(u.grid.d):
        uhat = sfft.fft(u.values, axis=j)
        uhat *= 1j * u.grid.kgrid(j)
        out.append(ComplexField(u.grid, sfft.ifft(uhat, axis=j)))
    return out


def gradient_arrays(values: np.ndarray, grid: GridSpec) -> list[np.ndarray]:
    """Raw-array variant of gradient_spectral (used in inner loops)."""
    out = []
    for j in range(grid.d):
        uhat = sfft.fft(values, axis=j)
        uhat *= 1j * grid.kgrid(j)
        out.append(sfft.ifft(uhat, axis=j))
    return out


def laplacian_arrays(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Spectral Laplacian."""
    vhat = sfft.fftn(values)
    vhat *= -grid.ksq()
    return sfft.ifftn(vhat)


def integrate(f, grid: GridSpec | None = None):
    """Rectangle-rule integral h_1...h_d * sum(f).

    Spectrally accurate on the periodic grid for fields whose tails decay
    below roundoff at the boundary.  Accepts a ComplexField or a raw array
    with an explicit grid.
    """
    if isinstance(f, ComplexField):
        values, grid = f.values, f.grid
    else:
        if grid is None:
            raise GridError("integrate(array) needs an explicit grid")
        values = f
    total = values.sum() * grid.cell_volume
    if np.iscomplexobj(values):
        return complex(total)
    return float(total)


def mass(u: ComplexField) -> float:
    return float(np.sum(u.values.real**2 + u.values.imag**2) * u.grid.cell_volume)


def grad_norm_sq(u: ComplexField) -> float:
    """Integral of |grad u|^2, via Parseval (no inverse transforms)."""
    uhat = sfft.fftn(u.values)
    weight = u.grid.ksq()
    total = np.sum(weight * (uhat.real**2 + uhat.imag**2))
    return float(total * u.grid.cell_volume / u.grid.size)


def spectral_tail_fraction(values: np.ndarray, grid: GridSpec, cut: float = 2.0 / 3.0) -> float:
    """Share of sum|u_hat|^2 carried by modes with |k_j| > cut*k_max on any axis."""
    uhat = sfft.fftn(values)
    power = uhat.real**2 + uhat.imag**2
    total = power.sum()
    if total == 0.0:
        return 0.0
    mask = np.zeros(grid.shape, dtype=bool)
    for j in range(grid.d):
        kj = np.abs(grid.kgrid(j))
        mask |= kj > cut * kj.max()
    return float(power[mask].sum() / total)


def norms(u: ComplexField, params=None) -> dict:
    """Mass, L^{p+1} norm, gradient norm and the weighted Sigma norm.

    The Sigma norm is (int |grad_A u|^2 + |V||u|^2 + |u|^2)^{1/2} with the
    vector potential A = Mx and trap V built from ``params`` (taken as zero
    when params is None).
    """
    m = mass(u)
    gsq = grad_norm_sq(u)
    out = {"mass": m, "grad_norm": float(np.sqrt(gsq))}
    if params is not None:
        from .model import build_potential, rotation_matrix

        absq = u.values.real**2 + u.values.imag**2
        p1 = params.p + 1.0
        out["lp_norm"] = float(integrate(absq ** (p1 / 2.0), u.grid) ** (1.0 / p1))
        V = build_potential(params, u.grid)
        grads = gradient_arrays(u.values, u.grid)
        if params.d >= 2 and any(om != 0.0 for om in params.omega):
            M = rotation_matrix(params)
            cov_sq = 0.0
            for j in range(params.d):
                Aj = np.zeros(u.grid.shape)
                for l in range(params.d):
                    if M[j, l] != 0.0:
                        Aj = Aj + M[j, l] * u.grid.coord(l)
                covj = grads[j] - 1j * Aj * u.values
                cov_sq = cov_sq + covj.real**2 + covj.imag**2
        else:
            cov_sq = sum(g.real**2 + g.imag**2 for g in grads)
        sigma_sq = integrate(cov_sq + (np.abs(V) + 1.0) * absq, u.grid)
        out["sigma_norm"] = float(np.sqrt(sigma_sq))
    return out
