"""Phase integrals, the closed-form propagator, and its brute-force twin."""

import math

import numpy as np
import pytest

from fiberphase.errors import NumericDomainError, SouthPoleError
from fiberphase.evolution import (
    _adaptive_simpson,
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
from fiberphase.fiber_geometry import (
    Arc,
    Helix,
    Line,
    SampledPath,
    SegmentPath,
    trajectory_from_path,
)
from fiberphase.spin_algebra import (
    angular_momentum,
    mat_exp,
    max_entry_norm,
    rotation_to_direction,
)


@pytest.fixture(scope="module")
def helix_traj():
    return trajectory_from_path(Helix(radius=1.0, pitch=1.0))


@pytest.fixture(scope="module")
def axis_helix_traj():
    return trajectory_from_path(Helix(radius=1.0, pitch=1.0), align="none")


def solid_angle(a, d):
    lam0 = math.atan2(2 * math.pi * a, d)
    return 2 * math.pi * (1 - math.cos(lam0))


# --- quadrature kernel -----------------------------------------------------

def test_adaptive_simpson_closed_forms():
    assert _adaptive_simpson(math.sin, 0.0, math.pi, 1e-12) == pytest.approx(2.0, abs=1e-12)
    assert _adaptive_simpson(math.exp, 0.0, 1.0, 1e-12) == pytest.approx(
        math.e - 1.0, abs=1e-12
    )
    # a sharp Lorentzian bump forces real subdivision
    peak = lambda x: 1.0 / (1.0 + 2500.0 * (x - 0.3) ** 2)
    exact = (math.atan(50.0 * 0.7) + math.atan(50.0 * 0.3)) / 50.0
    assert _adaptive_simpson(peak, 0.0, 1.0, 1e-12) == pytest.approx(exact, abs=1e-11)


def test_adaptive_simpson_empty_interval():
    assert _adaptive_simpson(math.sin, 1.0, 1.0, 1e-10) == 0.0


# --- phase integral --------------------------------------------------------

def test_axis_frame_helix_phase_is_linear(axis_helix_traj):
    """Constant integrand: Phi(T/2) is exactly half the solid angle."""
    traj = axis_helix_traj
    target = solid_angle(1.0, 1.0)
    assert geometric_phase(traj, traj.duration) == pytest.approx(target, rel=1e-12)
    assert geometric_phase(traj, 0.5 * traj.duration) == pytest.approx(
        0.5 * target, rel=1e-12
    )


def test_aligned_frame_gives_same_cyclic_phase(helix_traj):
    # the closed tangent loop encloses the same solid angle in any frame
    assert geometric_phase(helix_traj, helix_traj.duration) == pytest.approx(
        solid_angle(1.0, 1.0), rel=1e-9
    )


def test_straight_fiber_no_phase():
    traj = trajectory_from_path(SegmentPath(pieces=(Line(length=3.0),)))
    assert geometric_phase(traj, traj.duration) == 0.0
    assert vacuum_phase(traj, traj.duration, +1) == 0.0


def test_phase_additivity(helix_traj):
    traj = helix_traj
    s = 0.41 * traj.duration
    whole = geometric_phase(traj, traj.duration)
    parts = geometric_phase(traj, s) + geometric_phase(traj, traj.duration, t_start=s)
    assert abs(whole - parts) < 1e-10


def test_phase_invariant_under_rigid_rotation_of_input():
    """Alignment canonicalizes the frame: rotating the fiber in space
    changes the aligned tangent curve only by a rotation about +z, which
    the phase integral cannot see."""
    pts = np.stack(
        [
            np.cos(np.linspace(0, 2 * np.pi, 300)),
            np.sin(np.linspace(0, 2 * np.pi, 300)),
            np.linspace(0, 1.0, 300),
        ],
        axis=1,
    )
    c, s = math.cos(1.1), math.sin(1.1)
    rot_x = np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    base = trajectory_from_path(SampledPath(points=pts))
    moved = trajectory_from_path(SampledPath(points=pts @ rot_x.T))
    a = geometric_phase(base, base.duration)
    b = geometric_phase(moved, moved.duration)
    assert abs(a - b) < 1e-9


def test_phase_domain_validation(helix_traj):
    with pytest.raises(NumericDomainError):
        geometric_phase(helix_traj, helix_traj.duration + 1.0)
    with pytest.raises(NumericDomainError):
        geometric_phase(helix_traj, 1.0, t_start=2.0)


def test_south_pole_rejected_even_between_nodes():
    # great-circle tangent loop: the regularized integrand looks smooth
    # but drops 2 pi at the crossing, so the integral must refuse
    traj = trajectory_from_path(Helix(radius=1.0, pitch=0.0))
    with pytest.raises(SouthPoleError):
        geometric_phase(traj, traj.duration)
    with pytest.raises(SouthPoleError):
        phase_curve(traj, None, 50)


def test_vacuum_phase_values_and_validation(helix_traj):
    traj = helix_traj
    phi = geometric_phase(traj, traj.duration)
    assert vacuum_phase(traj, traj.duration, +1) == pytest.approx(0.5 * phi, abs=1e-12)
    assert vacuum_phase(traj, traj.duration, -1) == pytest.approx(-0.5 * phi, abs=1e-12)
    with pytest.raises(NumericDomainError):
        vacuum_phase(traj, traj.duration, 2)


# --- dynamical phase -------------------------------------------------------

def test_dynamical_phase_vanishes(helix_traj, axis_helix_traj):
    assert abs(dynamical_phase_residual(helix_traj, helix_traj.duration)) < 1e-8
    assert abs(dynamical_phase_residual(axis_helix_traj, axis_helix_traj.duration)) < 1e-8


def test_dynamical_phase_circle():
    circle = trajectory_from_path(Helix(radius=1.0, pitch=0.0), align="none")
    assert abs(dynamical_phase_residual(circle, circle.duration)) < 1e-8


def test_dynamical_phase_with_degenerate_stretches():
    # straight pieces carry no field and must contribute exactly nothing
    path = SegmentPath(
        pieces=(Line(length=1.0), Arc(radius=2.0, angle=0.9, axis=(0, 1, 0)), Line(length=1.0))
    )
    traj = trajectory_from_path(path)
    assert abs(dynamical_phase_residual(traj, traj.duration)) < 1e-8


# --- generator matrix ------------------------------------------------------

def test_precession_hamiltonian_basics():
    rep = angular_momentum(1.0)
    assert max_entry_norm(precession_hamiltonian(rep, np.zeros(3))) == 0.0
    omega = 0.83
    assert max_entry_norm(
        precession_hamiltonian(rep, np.array([0.0, 0.0, omega])) - omega * rep.J3
    ) < 1e-15
    with pytest.raises(NumericDomainError):
        precession_hamiltonian(rep, np.array([1.0, np.inf, 0.0]))


def test_precession_hamiltonian_helix_closed_form(axis_helix_traj):
    """At azimuth gamma = 0 the helix generator is
    rate*sin(lam0) * (-cos(lam0) J1 + sin(lam0) J3)."""
    traj = axis_helix_traj
    length = math.hypot(2 * math.pi, 1.0)
    rate = 2 * math.pi / length
    lam0 = math.atan2(2 * math.pi, 1.0)
    # tangent azimuth is rate*t + pi/2; pick t putting it at 2*pi
    t = (2 * math.pi - math.pi / 2) / rate
    rep = angular_momentum(1.0)
    k = traj.khat_at(t)
    kd = traj.khat_dot_at(t)
    ham = precession_hamiltonian(rep, np.cross(k, kd))
    expected = rate * math.sin(lam0) * (-math.cos(lam0) * rep.J1 + math.sin(lam0) * rep.J3)
    assert max_entry_norm(ham - expected) < 1e-12


# --- propagators -----------------------------------------------------------

def test_analytic_propagator_identity_at_zero(helix_traj):
    for j in (0.5, 1.0):
        rep = angular_momentum(j)
        u0 = analytic_propagator(rep, helix_traj, 0.0)
        assert max_entry_norm(u0 - np.eye(rep.dim)) < 1e-12


def test_analytic_propagator_cyclic_action(helix_traj):
    """U(T)|sigma> = exp(-i sigma Phi(T)) V(T)|sigma>."""
    traj = helix_traj
    rep = angular_momentum(1.0)
    phi = geometric_phase(traj, traj.duration)
    u = analytic_propagator(rep, traj, traj.duration)
    lam, gam = traj.angles_at(traj.duration)
    v = rotation_to_direction(rep, float(lam), float(gam))
    for sigma in (1.0, 0.0, -1.0):
        ket = rep.basis_state(sigma)
        got = u @ ket
        want = np.exp(-1j * sigma * phi) * (v @ ket)
        assert np.max(np.abs(got - want)) < 1e-10


def test_oracle_constant_field_any_step_count():
    """Constant generator: one midpoint step is already exact."""
    circle = trajectory_from_path(Helix(radius=2.0, pitch=0.0), align="none")
    rep = angular_momentum(1.0)
    b = np.array([0.0, 0.0, 0.5])  # field of the axis-frame circle, rate 1/a
    t = 0.6 * circle.duration
    exact = mat_exp(-1j * t * precession_hamiltonian(rep, b))
    for n in (1, 7, 64):
        u = oracle_propagator(rep, circle, t, n)
        assert max_entry_norm(u - exact) < 1e-12


def test_oracle_matches_analytic_quarter_period(helix_traj):
    rep = angular_momentum(0.5)
    t = 0.25 * helix_traj.duration
    ua = analytic_propagator(rep, helix_traj, t)
    uo = oracle_propagator(rep, helix_traj, t, 2**16)
    assert np.linalg.norm(ua - uo) < 1e-8


def test_oracle_interval_validation(helix_traj):
    rep = angular_momentum(0.5)
    with pytest.raises(NumericDomainError):
        oracle_propagator(rep, helix_traj, 1.0, 0)
    with pytest.raises(NumericDomainError):
        oracle_propagator(rep, helix_traj, 0.5, 16, t0=1.0)
    assert max_entry_norm(oracle_propagator(rep, helix_traj, 0.5, 16, t0=0.5) - np.eye(2)) == 0.0


def test_oracle_higher_spin_uses_dense_route(helix_traj):
    # dim > 3 falls back to the generic matrix exponential per step
    rep = angular_momentum(1.5)
    u = oracle_propagator(rep, helix_traj, 0.3 * helix_traj.duration, 256)
    assert max_entry_norm(u.conj().T @ u - np.eye(4)) < 1e-12


# --- states ----------------------------------------------------------------

def test_evolve_state_straight_fiber_is_constant():
    traj = trajectory_from_path(SegmentPath(pieces=(Line(length=2.0),)))
    rep = angular_momentum(1.0)
    out = evolve_state(rep, traj, {1.0: 1.0}, 1.7)
    assert np.max(np.abs(out - rep.basis_state(1.0))) < 1e-12


def test_evolve_state_accepts_dict_and_vector(helix_traj):
    rep = angular_momentum(1.0)
    t = 0.8 * helix_traj.duration
    from_dict = evolve_state(rep, helix_traj, {1.0: 1 / np.sqrt(2), -1.0: 1 / np.sqrt(2)}, t)
    vec = np.array([1 / np.sqrt(2), 0.0, 1 / np.sqrt(2)], dtype=complex)
    from_vec = evolve_state(rep, helix_traj, vec, t)
    assert np.max(np.abs(from_dict - from_vec)) < 1e-14
    assert abs(np.linalg.norm(from_dict) - 1.0) < 1e-10


def test_evolve_state_rejects_unnormalized(helix_traj):
    rep = angular_momentum(1.0)
    with pytest.raises(NumericDomainError, match="norm"):
        evolve_state(rep, helix_traj, {1.0: 0.5}, 1.0)


def test_evolve_runs_both_routes(helix_traj):
    rep = angular_momentum(1.0)
    result = evolve(rep, helix_traj, n_times=9, oracle_steps=4096)
    assert result.u_analytic.shape == (9, 3, 3)
    assert result.fidelity_deficit < 1e-6
    assert result.invariant_residual < 1e-7
    norms = np.linalg.norm(result.states, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-10
    eye = np.eye(3)
    for series in (result.u_analytic, result.u_oracle):
        defect = max(max_entry_norm(u.conj().T @ u - eye) for u in series)
        assert defect < 1e-10


# --- identity residuals ----------------------------------------------------

@pytest.mark.parametrize("j", [0.5, 1.0])
def test_rotating_frame_identity(helix_traj, j):
    rep = angular_momentum(j)
    worst = max(
        rotating_frame_residual(rep, helix_traj, t)
        for t in np.linspace(0.0, helix_traj.duration, 17)
    )
    assert worst < 1e-6


def test_rotating_frame_identity_trivial_on_straight_path():
    traj = trajectory_from_path(SegmentPath(pieces=(Line(length=2.0),)))
    rep = angular_momentum(0.5)
    assert rotating_frame_residual(rep, traj, 1.0) < 1e-12


@pytest.mark.parametrize("j", [0.5, 1.0])
def test_invariant_equation(helix_traj, j):
    rep = angular_momentum(j)
    worst = max(
        invariant_residual(rep, helix_traj, t)
        for t in np.linspace(0.0, helix_traj.duration, 17)
    )
    assert worst < 1e-7


def test_invariant_residual_truncation_scaling(helix_traj):
    """Doubling h quadruples the residual once truncation dominates.

    At the default h = 1e-5 the truncation term sits at the roundoff
    floor, so the clean factor-4 scaling is asserted one decade up.
    """
    rep = angular_momentum(1.0)
    t = 0.4 * helix_traj.duration
    r1 = invariant_residual(rep, helix_traj, t, fd_step=1e-4)
    r2 = invariant_residual(rep, helix_traj, t, fd_step=2e-4)
    assert 3.5 < r2 / r1 < 4.5


def test_fd_step_validation(helix_traj):
    rep = angular_momentum(1.0)
    with pytest.raises(NumericDomainError):
        invariant_residual(rep, helix_traj, 1.0, fd_step=0.0)
    with pytest.raises(NumericDomainError):
        rotating_frame_residual(rep, helix_traj, 1.0, fd_step=helix_traj.duration)


# --- phase curve -----------------------------------------------------------

def test_phase_curve_matches_pointwise_integral(helix_traj):
    curve = phase_curve(helix_traj, None, 17)
    assert curve.phi[0] == 0.0
    for i in (4, 9, 16):
        direct = geometric_phase(helix_traj, float(curve.times[i]))
        assert abs(curve.phi[i] - direct) < 1e-10


def test_phase_curve_mode_readouts(helix_traj):
    rep = angular_momentum(1.0)
    curve = phase_curve(helix_traj, rep, 9)
    assert curve.sigmas == (1.0, 0.0, -1.0)
    assert np.allclose(curve.mode_phase(1.0), curve.phi)
    assert np.allclose(curve.mode_phase(-1.0), -curve.phi)
    assert np.all(curve.vacuum_phase_sum == 0.0)
    assert np.allclose(curve.vacuum_phase(+1), 0.5 * curve.phi)
    assert abs(curve.dynamical_residual) < 1e-8
    with pytest.raises(NumericDomainError):
        curve.mode_phase(0.25)
    with pytest.raises(NumericDomainError):
        curve.vacuum_phase(0)
