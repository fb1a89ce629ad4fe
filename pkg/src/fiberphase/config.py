"""Numeric tolerances, collected in one frozen record.

Every bound used by the library and its verification suites lives here,
so a run has a single knob instead of constants scattered through the
modules.  The command-line config may override individual fields.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances, unless a field name says otherwise."""

    #: operator identities (commutators, Casimir), max-entry norm
    algebra: float = 1e-12
    #: conjugation of the direction operator onto J3
    conjugation: float = 1e-10
    #: acceptable |v| - 1 for vectors that must be unit length
    unit_vector: float = 1e-9
    #: b . khat for the precession field
    field_orthogonality: float = 1e-9
    #: field magnitudes below this count as no precession at all
    degenerate_field: float = 1e-12
    #: spherical-angle form of the field-direction orthogonality
    angle_identity: float = 1e-8
    #: U^dag U - 1 for either propagator route
    propagator_unitarity: float = 1e-10
    #: absolute quadrature tolerance per phase integral
    quadrature_abs: float = 1e-10
    #: finite-difference step for operator time derivatives
    fd_step: float = 1e-5
    #: 1 + khat_z below this counts as touching the south pole
    south_pole_margin: float = 1e-7
    #: acceptable |norm - 1| for state coefficient vectors
    state_norm: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()
