"""Geometric phase and helicity of light guided along a curved fiber.

The package follows one chain: a fiber path yields a momentum-direction
trajectory (fiber_geometry), the trajectory drives an exactly solvable
polarization evolution (evolution), and the bent-fiber helicity operator
turns the same kinematics into measurable expectation values and an
inversion map (helicity).  spin_algebra provides the dense angular-
momentum matrices underneath; checks bundles every promised property
into one auditable table; cli serializes results deterministically.
"""

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import ConfigError, FiberphaseError, NumericDomainError, SouthPoleError
from .spin_algebra import (
    AngularMomentumRep,
    angular_momentum,
    direction_operator,
    mat_exp,
    rotation_to_direction,
)
from .fiber_geometry import (
    Arc,
    EffectiveField,
    Helix,
    Line,
    MomentumTrajectory,
    SampledPath,
    SegmentPath,
    effective_field,
    helix_frequency,
    trajectory_from_path,
)
from .evolution import (
    EvolutionResult,
    PhaseCurve,
    analytic_propagator,
    dynamical_phase_residual,
    evolve,
    evolve_state,
    geometric_phase,
    invariant_residual,
    oracle_propagator,
    phase_curve,
    precession_hamiltonian,
    rotating_frame_residual,
    vacuum_phase,
)
from .helicity import (
    InversionScan,
    helicity_expectation_closed,
    helicity_expectation_invariant_mode,
    helicity_expectation_matrix,
    helicity_vector,
    inversion_scan,
    zeta,
)
from .checks import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "AngularMomentumRep",
    "Arc",
    "CheckResult",
    "ConfigError",
    "DEFAULT_TOLERANCES",
    "EffectiveField",
    "EvolutionResult",
    "FiberphaseError",
    "Helix",
    "InversionScan",
    "Line",
    "MomentumTrajectory",
    "NumericDomainError",
    "PhaseCurve",
    "SampledPath",
    "SegmentPath",
    "SouthPoleError",
    "Tolerances",
    "analytic_propagator",
    "angular_momentum",
    "direction_operator",
    "dynamical_phase_residual",
    "effective_field",
    "evolve",
    "evolve_state",
    "geometric_phase",
    "helicity_expectation_closed",
    "helicity_expectation_invariant_mode",
    "helicity_expectation_matrix",
    "helicity_vector",
    "helix_frequency",
    "invariant_residual",
    "inversion_scan",
    "mat_exp",
    "oracle_propagator",
    "phase_curve",
    "precession_hamiltonian",
    "rotating_frame_residual",
    "rotation_to_direction",
    "run_checks",
    "trajectory_from_path",
    "vacuum_phase",
    "zeta",
]
