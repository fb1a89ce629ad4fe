"""Named self-checks: every property the package promises, as one table.

Each check returns a residual and the bound it must stay under, so the
verify command can print an auditable table instead of a bare yes/no.
The same catalog backs the test suite; bounds live here, next to the
code they constrain.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NumericDomainError
from .evolution import (
    analytic_propagator,
    dynamical_phase_residual,
    geometric_phase,
    invariant_residual,
    oracle_propagator,
    phase_curve,
    rotating_frame_residual,
)
from .fiber_geometry import (
    FiberPath,
    Helix,
    MomentumTrajectory,
    spherical_orthogonality_residual,
    equation_of_motion_residual,
    trajectory_from_path,
)
from .helicity import (
    helicity_expectation_closed,
    helicity_expectation_matrix,
    helicity_vector,
    inversion_scan,
    zeta,
)
from .spin_algebra import angular_momentum, max_entry_norm, rotation_to_direction

__all__ = ["CheckResult", "run_checks", "SOLID_ANGLE_HELICES"]

#: (radius, pitch) pairs for the cyclic solid-angle check
SOLID_ANGLE_HELICES = ((1.0, 1.0), (1.0, 0.5), (0.5, 2.0), (2.0, 3.0))

_SPINS = (0.5, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    bound: float
    passed: bool
    detail: str = ""


def _result(name: str, residual: float, bound: float, detail: str = "") -> CheckResult:
    residual = float(residual)
    return CheckResult(name, residual, float(bound), bool(residual <= bound), detail)


def _spin_tag(j: float) -> str:
    return "spin_half" if j == 0.5 else f"spin_{j:g}".replace(".", "p")


def _rotated_about_z(traj: MomentumTrajectory, beta: float) -> MomentumTrajectory:
    rz = np.array(
        [
            [math.cos(beta), -math.sin(beta), 0.0],
            [math.sin(beta), math.cos(beta), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    return dataclasses.replace(
        traj,
        frame_rotation=rz @ traj.frame_rotation,
        khat=traj.khat @ rz.T,
        gamma=traj.gamma + beta,
    )


def _geometry_checks(traj: MomentumTrajectory, tol: Tolerances) -> list[CheckResult]:
    out = []
    norms = np.linalg.norm(traj.khat_at(traj.times), axis=1)
    out.append(_result("tangent_unit_norm", np.max(np.abs(norms - 1.0)), tol.unit_vector))

    k = traj.khat_at(traj.times)
    kd = traj.khat_dot_at(traj.times)
    b = np.cross(k, kd)
    mag = np.linalg.norm(b, axis=1)
    live = mag > tol.degenerate_field
    ortho = np.max(np.abs(np.sum(k[live] * b[live], axis=1) / mag[live])) if np.any(live) else 0.0
    out.append(_result("field_orthogonality", ortho, tol.field_orthogonality))

    out.append(
        _result(
            "spherical_identity",
            spherical_orthogonality_residual(traj, tol),
            tol.angle_identity,
        )
    )
    out.append(
        _result("equation_of_motion", equation_of_motion_residual(traj), tol.unit_vector)
    )
    return out


def _propagator_checks(
    traj: MomentumTrajectory, oracle_steps: int, tol: Tolerances
) -> list[CheckResult]:
    out = []
    t_grid = np.linspace(0.0, traj.duration, 17)[1:]
    for j in _SPINS:
        rep = angular_momentum(j)
        tag = _spin_tag(j)
        eye = np.eye(rep.dim)

        unit_a = unit_o = 0.0
        persist = 0.0
        lam0, gam0 = traj.angles_at(0.0)
        v0 = rotation_to_direction(rep, float(lam0), float(gam0))
        for t in t_grid:
            ua = analytic_propagator(rep, traj, float(t), tolerances=tol)
            unit_a = max(unit_a, max_entry_norm(ua.conj().T @ ua - eye))
            lam, gam = traj.angles_at(float(t))
            vt = rotation_to_direction(rep, float(lam), float(gam))
            core = vt.conj().T @ ua @ v0
            persist = max(persist, float(np.max(np.abs(np.abs(np.diag(core)) - 1.0))))
        uo = oracle_propagator(rep, traj, traj.duration, oracle_steps, tolerances=tol)
        unit_o = max_entry_norm(uo.conj().T @ uo - eye)
        out.append(_result(f"unitarity_analytic_{tag}", unit_a, tol.propagator_unitarity))
        out.append(_result(f"unitarity_oracle_{tag}", unit_o, tol.propagator_unitarity))
        out.append(_result(f"eigenstate_persistence_{tag}", persist, tol.propagator_unitarity))

        ua_final = analytic_propagator(rep, traj, traj.duration, tolerances=tol)
        deficit = float(np.linalg.norm(ua_final - uo))
        out.append(
            _result(f"oracle_equivalence_{tag}", deficit, 1e-6, f"n_steps={oracle_steps}")
        )

        powers = [2**p for p in range(10, 17)]
        deficits = [
            float(
                np.linalg.norm(
                    ua_final - oracle_propagator(rep, traj, traj.duration, n, tolerances=tol)
                )
            )
            for n in powers
        ]
        slope = -np.polyfit(np.log(powers), np.log(deficits), 1)[0]
        out.append(
            _result(
                f"oracle_convergence_order_{tag}",
                abs(slope - 2.0),
                0.1,
                f"slope={slope:.4f}",
            )
        )

        frame = max(
            rotating_frame_residual(rep, traj, float(t), tolerances=tol) for t in t_grid
        )
        out.append(_result(f"rotating_frame_identity_{tag}", frame, 1e-6))

        inv = max(invariant_residual(rep, traj, float(t), tolerances=tol) for t in t_grid)
        out.append(_result(f"invariant_equation_{tag}", inv, 1e-7))
    return out


def _phase_checks(traj: MomentumTrajectory, tol: Tolerances) -> list[CheckResult]:
    out = []
    total = geometric_phase(traj, traj.duration, tolerances=tol)
    split = 0.37 * traj.duration
    stitched = geometric_phase(traj, split, tolerances=tol) + geometric_phase(
        traj, traj.duration, t_start=split, tolerances=tol
    )
    out.append(_result("phase_additivity", abs(total - stitched), 1e-10))

    rotated = _rotated_about_z(traj, 0.7)
    out.append(
        _result(
            "gauge_invariance",
            abs(geometric_phase(rotated, rotated.duration, tolerances=tol) - total),
            1e-10,
        )
    )

    curve = phase_curve(traj, None, 65, tolerances=tol)
    out.append(
        _result("vacuum_cancellation", np.max(np.abs(curve.vacuum_phase_sum)), 1e-15)
    )
    half = np.max(np.abs(curve.vacuum_phase(+1) - 0.5 * curve.phi))
    out.append(_result("vacuum_half_phase", half, 1e-10))

    out.append(
        _result(
            "dynamical_phase",
            abs(dynamical_phase_residual(traj, traj.duration, tolerances=tol)),
            1e-8,
        )
    )
    return out


def _reference_checks(tol: Tolerances) -> list[CheckResult]:
    """Checks pinned to reference geometries, independent of the config path."""
    out = []

    worst = 0.0
    for a, d in SOLID_ANGLE_HELICES:
        path = Helix(radius=a, pitch=d)
        traj = trajectory_from_path(path, tolerances=tol)
        lam0 = math.atan2(2.0 * math.pi * a, d)
        target = 2.0 * math.pi * (1.0 - math.cos(lam0))
        phi = geometric_phase(traj, traj.duration, tolerances=tol)
        worst = max(worst, abs(phi - target) / target)
    out.append(_result("cyclic_solid_angle", worst, 1e-9, "4 helices; relative error"))

    circle = trajectory_from_path(Helix(radius=1.0, pitch=0.0), align="none", tolerances=tol)
    out.append(
        _result(
            "dynamical_phase_circle",
            abs(dynamical_phase_residual(circle, circle.duration, tolerances=tol)),
            1e-8,
        )
    )

    lam = np.linspace(0.05, 3.0, 20)
    x = np.geomspace(1e-3, 1e3, 20)
    lam_g = np.repeat(lam, x.size)
    x_g = np.tile(x, lam.size)
    kvec = helicity_vector(lam_g, 0.37, x_g, 1.0)
    out.append(
        _result(
            "helicity_magnitude_consistency",
            np.max(np.abs(np.linalg.norm(kvec, axis=-1) - zeta(lam_g, x_g, 1.0))),
            1e-12,
            "20x20 grid",
        )
    )

    rep = angular_momentum(1.0)
    worst = 0.0
    for sigma in (+1, -1):
        closed = helicity_expectation_closed(lam_g, x_g, sigma)
        state = rep.basis_state(float(sigma))
        for i in range(lam_g.size):
            matrix = helicity_expectation_matrix(rep, state, kvec[i], tolerances=tol)
            worst = max(worst, abs(closed[i] - matrix))
    out.append(_result("helicity_closed_vs_matrix", worst, 1e-12, "20x20 grid; both sigma"))

    sym = np.max(
        np.abs(
            helicity_expectation_closed(lam_g, x_g, +1)
            + helicity_expectation_closed(lam_g, x_g, -1)
        )
    )
    out.append(_result("helicity_sign_symmetry", sym, 1e-15))

    inv = max(
        abs(helicity_expectation_closed(0.01, 1e6, sigma) - (-sigma)) for sigma in (+1, -1)
    )
    out.append(_result("inversion_limit", inv, 1e-3, "lam=0.01; rate ratio 1e6"))

    # at zero winding rate the expectation is sigma cos(lam): no sign flip
    # can occur while the polar angle stays below pi/2
    scan = inversion_scan(lam=np.linspace(0.05, 1.5, 20), gamma_dot_over_k=np.zeros(1))
    inverted = int(np.sum(scan.values["inverted_plus"]) + np.sum(scan.values["inverted_minus"]))
    out.append(_result("no_inversion_at_zero_rate", float(inverted), 0.0, "lam < pi/2"))

    k_dir = helicity_vector(0.3, 0.37, 1e-8, 1.0)
    k_dir = k_dir / np.linalg.norm(k_dir)
    khat = np.array([math.sin(0.3) * math.cos(0.37), math.sin(0.3) * math.sin(0.37), math.cos(0.3)])
    angle = float(np.arccos(np.clip(np.dot(k_dir, khat), -1.0, 1.0)))
    out.append(_result("smooth_limit_alignment", angle, 1e-6, "rate ratio 1e-8"))
    return out


def run_checks(
    path: FiberPath,
    *,
    n_samples: int = 4096,
    oracle_steps: int = 65536,
    align: str = "initial_tangent",
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> list[CheckResult]:
    """Run the full property catalog against one fiber path.

    Geometry, propagator, and phase checks use the given path; the
    reference block pins closed-form values on fixed geometries.  Raises
    the underlying domain errors (for instance a south-pole violation)
    rather than converting them to failed rows: a check that cannot run
    is an error, not a pass or a fail.
    """
    traj = trajectory_from_path(path, n_samples, align=align, tolerances=tolerances)
    results = []
    results.extend(_geometry_checks(traj, tolerances))
    results.extend(_propagator_checks(traj, oracle_steps, tolerances))
    results.extend(_phase_checks(traj, tolerances))
    results.extend(_reference_checks(tolerances))
    return results
