"""Path kinematics: tangent extraction, frames, fields, path classes."""

import math

import numpy as np
import pytest

from fiberphase.errors import NumericDomainError, SouthPoleError
from fiberphase.fiber_geometry import (
    Arc,
    Helix,
    Line,
    SampledPath,
    SegmentPath,
    effective_field,
    equation_of_motion_residual,
    helix_frequency,
    spherical_orthogonality_residual,
    trajectory_from_path,
)


def helix_points(a, d, n, turns=1.0):
    phi = np.linspace(0.0, 2.0 * np.pi * turns, n)
    return np.stack([a * np.cos(phi), a * np.sin(phi), d * phi / (2 * np.pi)], axis=1)


# --- helix kinematics ------------------------------------------------------

def test_helix_axis_frame_matches_hand_formula():
    """In its own frame the helix tangent is the textbook constant-polar cone."""
    a, d = 1.0, 1.0
    length = math.hypot(2 * math.pi * a, d)
    rate = 2 * math.pi / length
    sin0, cos0 = 2 * math.pi * a / length, d / length
    traj = trajectory_from_path(Helix(radius=a, pitch=d), align="none")
    assert traj.duration == pytest.approx(length, rel=1e-15)
    for t in (0.0, 0.3 * length, 0.77 * length):
        expected = np.array(
            [-sin0 * math.sin(rate * t), sin0 * math.cos(rate * t), cos0]
        )
        assert np.allclose(traj.khat_at(t), expected, atol=1e-14)
    # constant polar angle, constant azimuth rate
    assert np.max(np.abs(traj.lam - math.atan2(2 * math.pi * a, d))) < 1e-12
    assert np.max(np.abs(traj.gamma_dot - rate)) < 1e-12
    assert np.max(np.abs(traj.lam_dot)) < 1e-12


def test_default_alignment_starts_at_pole():
    traj = trajectory_from_path(Helix(radius=1.0, pitch=1.0))
    assert np.allclose(traj.khat_at(0.0), [0.0, 0.0, 1.0], atol=1e-12)
    assert traj.lam[0] < 1e-9
    # polar angle explores [0, 2*lam0] in the aligned frame; the sample
    # grid straddles the peak, hence the coarse tolerance
    lam0 = math.atan2(2 * math.pi, 1.0)
    assert np.max(traj.lam) == pytest.approx(2 * lam0, abs=1e-5)
    assert traj.min_one_plus_kz == pytest.approx(1 + math.cos(2 * lam0), abs=1e-7)


def test_unit_norm_and_orthogonality_everywhere():
    traj = trajectory_from_path(Helix(radius=0.7, pitch=2.3, turns=1.5))
    k = traj.khat_at(traj.times)
    kd = traj.khat_dot_at(traj.times)
    assert np.max(np.abs(np.linalg.norm(k, axis=1) - 1.0)) < 1e-14
    assert np.max(np.abs(np.sum(k * kd, axis=1))) < 1e-14


def test_equation_of_motion_residual_roundoff():
    traj = trajectory_from_path(Helix(radius=1.0, pitch=1.0))
    assert equation_of_motion_residual(traj) < 1e-13


def test_spherical_identity_residual_roundoff():
    traj = trajectory_from_path(Helix(radius=1.0, pitch=0.4, turns=2.0))
    assert spherical_orthogonality_residual(traj) < 1e-12


def test_effective_field_matches_derived_helix_form():
    """b = rate*sin(lam0) * (-cos(lam0)cos(g), -cos(lam0)sin(g), sin(lam0))."""
    a, d = 1.0, 1.0
    length = math.hypot(2 * math.pi * a, d)
    rate = 2 * math.pi / length
    lam0 = math.atan2(2 * math.pi * a, d)
    traj = trajectory_from_path(Helix(radius=a, pitch=d), align="none")
    for t in (0.1, 1.9, 4.2):
        gamma = rate * t + math.pi / 2  # azimuth of the tangent at time t
        field = effective_field(traj, t)
        expected = (
            rate
            * math.sin(lam0)
            * np.array(
                [
                    -math.cos(lam0) * math.cos(gamma),
                    -math.cos(lam0) * math.sin(gamma),
                    math.sin(lam0),
                ]
            )
        )
        assert np.allclose(field.b, expected, atol=1e-12)
        assert field.magnitude == pytest.approx(rate * math.sin(lam0), rel=1e-12)
        assert not field.degenerate
        assert abs(np.dot(field.b_hat, traj.khat_at(t))) < 1e-12


def test_effective_field_degenerate_on_straight_stretch():
    path = SegmentPath(pieces=(Line(length=2.0),))
    traj = trajectory_from_path(path)
    field = effective_field(traj, 1.0)
    assert field.degenerate
    assert field.magnitude == 0.0


# --- frequency conventions -------------------------------------------------

def test_helix_frequency_conventions():
    a, d = 0.8, 1.7
    assert helix_frequency(a, d) == pytest.approx(
        2 * math.pi / math.hypot(d, 2 * math.pi * a), rel=1e-15
    )
    assert helix_frequency(a, d, "four_pi") == pytest.approx(
        2 * math.pi / math.hypot(d, 4 * math.pi * a), rel=1e-15
    )
    # circle limit: geometric rate is 1/a
    assert helix_frequency(a, 0.0) == pytest.approx(1.0 / a, rel=1e-15)


def test_helix_frequency_rejects_degenerate_and_unknown():
    with pytest.raises(NumericDomainError):
        helix_frequency(0.0, 0.0)
    with pytest.raises(NumericDomainError):
        helix_frequency(1.0, -1.0)
    with pytest.raises(NumericDomainError):
        helix_frequency(1.0, 1.0, "half_pi")


# --- sampled paths ---------------------------------------------------------

def test_sampled_helix_approximates_exact_tangent():
    pts = helix_points(1.0, 1.0, 400)
    traj = trajectory_from_path(SampledPath(points=pts), n_samples=512)
    exact = trajectory_from_path(Helix(radius=1.0, pitch=1.0), n_samples=512)
    # interior comparison; spline ends are one-sided
    ts = np.linspace(0.1 * exact.duration, 0.9 * exact.duration, 64)
    err = np.max(np.linalg.norm(traj.khat_at(ts) - exact.khat_at(ts), axis=1))
    assert err < 1e-5
    assert traj.duration == pytest.approx(exact.duration, abs=1e-7)


def test_sampled_path_tangent_exactly_unit_and_orthogonal():
    pts = helix_points(1.3, 0.9, 120)
    traj = trajectory_from_path(SampledPath(points=pts), n_samples=256)
    k = traj.khat_at(traj.times)
    kd = traj.khat_dot_at(traj.times)
    assert np.max(np.abs(np.linalg.norm(k, axis=1) - 1.0)) < 1e-14
    # the projected rate keeps k . kdot = 0 to roundoff by construction
    assert np.max(np.abs(np.sum(k * kd, axis=1))) < 1e-12


def test_closed_sampled_path_smooth_at_seam():
    phi = np.linspace(0.0, 2 * np.pi, 200, endpoint=False)
    pts = np.stack([np.cos(phi), np.sin(phi), 0.3 * np.sin(2 * phi)], axis=1)
    traj = trajectory_from_path(SampledPath(points=pts, closed=True), align="none")
    gap = np.linalg.norm(traj.khat_at(0.0) - traj.khat_at(traj.duration))
    assert gap < 1e-9


def test_sampled_path_rejects_kinks_and_garbage():
    zigzag = np.array([[0, 0, 0], [0, 0, 1], [1, 0, 1], [1, 0, 2], [2, 0, 2]], float)
    with pytest.raises(NumericDomainError, match="kinked"):
        trajectory_from_path(SampledPath(points=zigzag))
    with pytest.raises(NumericDomainError):
        SampledPath(points=np.zeros((3, 3)))  # too few
    with pytest.raises(NumericDomainError):
        SampledPath(points=np.array([[0, 0, 0], [0, 0, 0], [1, 1, 1], [2, 2, 2]], float))
    with pytest.raises(NumericDomainError):
        SampledPath(points=np.array([[0, 0, 0], [np.nan, 0, 1], [1, 0, 1], [1, 1, 1]]))


# --- segment paths ---------------------------------------------------------

def test_segment_path_line_then_arc():
    path = SegmentPath(pieces=(Line(length=2.0), Arc(radius=1.5, angle=np.pi / 2, axis=(0, 1, 0))))
    traj = trajectory_from_path(path)
    assert traj.duration == pytest.approx(2.0 + 1.5 * np.pi / 2, rel=1e-15)
    assert traj.breakpoints == (2.0,)
    assert np.allclose(traj.khat_at(1.0), [0, 0, 1], atol=1e-15)
    # axis = +y turns the tangent from +z toward +x
    mid = traj.khat_at(2.0 + 1.5 * np.pi / 4)
    assert np.allclose(mid, [math.sqrt(0.5), 0.0, math.sqrt(0.5)], atol=1e-12)
    end = traj.khat_at(traj.duration)
    assert np.allclose(end, [1, 0, 0], atol=1e-12)
    # curvature magnitude 1/R inside the arc, zero on the line
    assert np.linalg.norm(traj.khat_dot_at(0.5)) == 0.0
    assert np.linalg.norm(traj.khat_dot_at(3.0)) == pytest.approx(1 / 1.5, rel=1e-12)


def test_segment_path_chains_tangent_continuously():
    # third piece bends in an oblique plane; its axis must be perpendicular
    # to the tangent inherited from the first arc, (sin 0.8, 0, cos 0.8)
    oblique = (math.cos(0.8), 0.0, -math.sin(0.8))
    path = SegmentPath(
        pieces=(
            Arc(radius=1.0, angle=0.8, axis=(0, 1, 0)),
            Line(length=1.0),
            Arc(radius=2.0, angle=1.1, axis=oblique),
        )
    )
    traj = trajectory_from_path(path, n_samples=2048)
    for cut in traj.breakpoints:
        before = traj.khat_at(cut - 1e-9)
        after = traj.khat_at(cut + 1e-9)
        assert np.linalg.norm(before - after) < 1e-7


def test_arc_axis_must_be_perpendicular():
    with pytest.raises(NumericDomainError, match="perpendicular"):
        trajectory_from_path(
            SegmentPath(pieces=(Arc(radius=1.0, angle=1.0, axis=(0, 0, 1)),))
        )


def test_arc_validation():
    with pytest.raises(NumericDomainError):
        Arc(radius=0.0, angle=1.0, axis=(0, 1, 0))
    with pytest.raises(NumericDomainError):
        Arc(radius=1.0, angle=-0.5, axis=(0, 1, 0))
    with pytest.raises(NumericDomainError):
        Arc(radius=1.0, angle=1.0, axis=(0, 0, 0))


def test_antiparallel_start_tangent_alignment():
    # alignment must handle a tangent pointing exactly along -z
    path = SegmentPath(pieces=(Line(length=1.0),), start_tangent=(0, 0, -1))
    traj = trajectory_from_path(path)
    assert np.allclose(traj.khat_at(0.5), [0, 0, 1], atol=1e-12)


# --- trajectory surface ----------------------------------------------------

def test_scalar_and_array_evaluation_shapes():
    traj = trajectory_from_path(Helix(radius=1.0, pitch=1.0))
    assert traj.khat_at(0.5).shape == (3,)
    assert traj.khat_at(np.linspace(0, 1, 5)).shape == (5, 3)
    lam, gamma = traj.angles_at(0.5)
    assert np.ndim(lam) == 0 and np.ndim(gamma) == 0
    lam, gamma = traj.angles_at(np.array([0.1, 0.2]))
    assert lam.shape == (2,)
    with pytest.raises(NumericDomainError):
        traj.khat_at(np.nan)


def test_south_pole_touch_raises():
    # a circle aligned to start at +z sweeps straight through -z; the
    # local guard fires when an evaluation point lands on the pole
    traj = trajectory_from_path(Helix(radius=1.0, pitch=0.0))
    assert traj.min_one_plus_kz < 1e-7
    with pytest.raises(SouthPoleError):
        traj.connection_at(np.linspace(0.0, traj.duration, 65))


def test_parked_at_pole_is_not_an_error():
    # sitting still at -z never moves, so the chart defect is unreachable
    path = SegmentPath(pieces=(Line(length=2.0),), start_tangent=(0, 0, -1))
    traj = trajectory_from_path(path, align="none")
    assert np.all(traj.connection_at(np.linspace(0, 2, 9)) == 0.0)


def test_trajectory_argument_validation():
    with pytest.raises(ValueError):
        trajectory_from_path(Helix(radius=1.0, pitch=1.0), n_samples=8)
    with pytest.raises(ValueError):
        trajectory_from_path(Helix(radius=1.0, pitch=1.0), align="axis")


def test_helix_validation():
    with pytest.raises(NumericDomainError):
        Helix(radius=-1.0, pitch=1.0)
    with pytest.raises(NumericDomainError):
        Helix(radius=1.0, pitch=-0.1)
    with pytest.raises(NumericDomainError):
        Helix(radius=1.0, pitch=1.0, turns=0.0)
    with pytest.raises(NumericDomainError):
        Helix(radius=1.0, pitch=1.0, omega_convention="sidereal")
    with pytest.raises(NumericDomainError):
        Helix(radius=1.0, pitch=1.0, wavenumber=0.0)
