"""Spectral numerics laboratory for rotational nonlinear Schrodinger equations."""

__version__ = "0.1.0"

from .field import ComplexField, GridSpec, gradient_spectral, integrate, make_grid, norms
from .model import (
    EnergyBreakdown,
    PhysParams,
    RegimeVerdict,
    apply_rotation,
    build_potential,
    classify_regime,
    energy_breakdown,
    gauge_transform,
    nonlinear_energy_density,
    rotation_matrix,
    threshold_mass,
)
from .groundstate import (
    GroundState,
    RadialProfile,
    el_residual,
    gradient_flow,
    lift_to_grid,
    shoot_radial,
)
from .dynamics import (
    BlowupCriteria,
    EvolutionTrace,
    StrangStepper,
    detect_blowup,
    evolve,
    fit_blowup_rate,
    step_strang,
)
from .vortex import (
    VortexReport,
    VortexSpec,
    closed_form_energy,
    divergence_sweep,
    make_vortex,
    quadrature_energy,
)
from .inequalities import InequalityReport, check_diamagnetic, check_gn, gaussian_moment
from .threshold import ThresholdResult, bisect_threshold, classify_run, compare_to_critical
from .snapshot import read_snapshot, write_snapshot

__all__ = [name for name in dir() if not name.startswith("_")]
