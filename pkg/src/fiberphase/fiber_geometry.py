"""Fiber curves and the momentum-direction kinematics they induce.

A path is traversed at unit speed, so time equals arc length in natural
units.  The photon momentum direction khat(t) is the unit tangent, and
the precession field that drives the polarization dynamics is
b(t) = khat x dkhat/dt.

Frame convention: by default the curve is rigidly rotated once so that
the initial tangent points along +z, which pins the polar angle to
lam(0) = 0 and the propagator to start at the identity.  Passing
align="none" keeps the curve's own axes instead; a helix then shows the
familiar constant polar angle arctan(2 pi a / d) about its axis, at the
price of a nontrivial initial momentum direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NumericDomainError, SouthPoleError

__all__ = [
    "Helix",
    "SampledPath",
    "Line",
    "Arc",
    "SegmentPath",
    "FiberPath",
    "EffectiveField",
    "MomentumTrajectory",
    "trajectory_from_path",
    "effective_field",
    "helix_frequency",
    "equation_of_motion_residual",
    "spherical_orthogonality_residual",
    "OMEGA_CONVENTIONS",
]

#: ways to turn helix dimensions into a winding frequency: "geometric" is the
#: actual azimuthal rate of the unit-speed tangent, 2 pi / sqrt(d^2 + (2 pi a)^2);
#: "four_pi" keeps the variant with (4 pi a)^2 under the root that appears in
#: part of the literature, exposed for comparison rather than corrected away.
OMEGA_CONVENTIONS = ("geometric", "four_pi")

_ZHAT = np.array([0.0, 0.0, 1.0])


def _check_wavenumber(k: float) -> None:
    if not (np.isfinite(k) and k > 0):
        raise NumericDomainError("wavenumber must be positive and finite")


@dataclass(frozen=True)
class Helix:
    """Right-handed circular helix: radius a, axial advance d per turn."""

    radius: float
    pitch: float
    turns: float = 1.0
    omega_convention: str = "geometric"
    wavenumber: float = 1.0

    def __post_init__(self) -> None:
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise NumericDomainError("helix radius must be positive")
        if not (np.isfinite(self.pitch) and self.pitch >= 0):
            raise NumericDomainError("helix pitch must be nonnegative")
        if not (np.isfinite(self.turns) and self.turns > 0):
            raise NumericDomainError("helix turns must be positive")
        if self.omega_convention not in OMEGA_CONVENTIONS:
            raise NumericDomainError(
                f"unknown omega convention {self.omega_convention!r}; "
                f"expected one of {OMEGA_CONVENTIONS}"
            )
        _check_wavenumber(self.wavenumber)


@dataclass(frozen=True, eq=False)
class SampledPath:
    """Curve given as ordered sample points, interpolated by a cubic spline.

    Open paths use not-a-knot ends; closed paths are closed up and use a
    periodic spline so the seam is as smooth as the interior.
    """

    points: np.ndarray
    closed: bool = False
    wavenumber: float = 1.0

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 4:
            raise NumericDomainError("sampled path needs at least 4 points of shape (n, 3)")
        if not np.all(np.isfinite(pts)):
            raise NumericDomainError("sampled path has non-finite coordinates")
        if np.any(np.linalg.norm(np.diff(pts, axis=0), axis=1) == 0.0):
            raise NumericDomainError("sampled path: consecutive points must be distinct")
        object.__setattr__(self, "points", pts)
        _check_wavenumber(self.wavenumber)


@dataclass(frozen=True)
class Line:
    """Straight segment continuing along the incoming tangent."""

    length: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.length) and self.length > 0):
            raise NumericDomainError("line length must be positive")


@dataclass(frozen=True, eq=False)
class Arc:
    """Circular segment turning about ``axis``, which must be perpendicular
    to the incoming tangent (that is the tangency constraint)."""

    radius: float
    angle: float
    axis: np.ndarray

    def __post_init__(self) -> None:
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise NumericDomainError("arc radius must be positive")
        if not (np.isfinite(self.angle) and self.angle > 0):
            raise NumericDomainError("arc angle must be positive")
        ax = np.array(self.axis, dtype=float)
        if ax.shape != (3,) or not np.all(np.isfinite(ax)):
            raise NumericDomainError("arc axis must be a finite 3-vector")
        norm = np.linalg.norm(ax)
        if norm == 0.0:
            raise NumericDomainError("arc axis must be nonzero")
        object.__setattr__(self, "axis", ax / norm)


@dataclass(frozen=True, eq=False)
class SegmentPath:
    """Chain of lines and arcs, tangent-continuous by construction."""

    pieces: tuple
    start_point: np.ndarray = (0.0, 0.0, 0.0)
    start_tangent: np.ndarray = (0.0, 0.0, 1.0)
    wavenumber: float = 1.0

    def __post_init__(self) -> None:
        pieces = tuple(self.pieces)
        if not pieces:
            raise NumericDomainError("segment path needs at least one piece")
        for piece in pieces:
            if not isinstance(piece, (Line, Arc)):
                raise NumericDomainError("segment path pieces must be Line or Arc")
        p0 = np.array(self.start_point, dtype=float)
        t0 = np.array(self.start_tangent, dtype=float)
        if p0.shape != (3,) or t0.shape != (3,) or not np.all(np.isfinite(p0)) or not np.all(np.isfinite(t0)):
            raise NumericDomainError("segment path start point/tangent must be finite 3-vectors")
        norm = np.linalg.norm(t0)
        if norm == 0.0:
            raise NumericDomainError("segment path start tangent must be nonzero")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "start_point", p0)
        object.__setattr__(self, "start_tangent", t0 / norm)
        _check_wavenumber(self.wavenumber)


FiberPath = Helix | SampledPath | SegmentPath


# ---------------------------------------------------------------------------
# kinematics backends: unit tangent and its time derivative in the raw frame

class _HelixKinematics:
    kind = "helix"

    def __init__(self, path: Helix) -> None:
        turn_length = math.hypot(2.0 * math.pi * path.radius, path.pitch)
        self.rate = 2.0 * math.pi / turn_length
        self.sin_polar = 2.0 * math.pi * path.radius / turn_length
        self.cos_polar = path.pitch / turn_length
        self.duration = path.turns * turn_length
        self.breakpoints: tuple[float, ...] = ()

    def tangent(self, ts: np.ndarray) -> np.ndarray:
        phi = self.rate * ts
        return np.stack(
            [
                -self.sin_polar * np.sin(phi),
                self.sin_polar * np.cos(phi),
                np.full_like(ts, self.cos_polar),
            ],
            axis=-1,
        )

    def tangent_rate(self, ts: np.ndarray) -> np.ndarray:
        phi = self.rate * ts
        scale = -self.rate * self.sin_polar
        return np.stack(
            [scale * np.cos(phi), scale * np.sin(phi), np.zeros_like(ts)], axis=-1
        )


class _SplineKinematics:
    kind = "samples"

    def __init__(self, path: SampledPath, max_turn_angle: float) -> None:
        pts = path.points
        if path.closed and np.linalg.norm(pts[-1] - pts[0]) > 0.0:
            pts = np.vstack([pts, pts[0]])
        steps = np.diff(pts, axis=0)
        lengths = np.linalg.norm(steps, axis=1)
        directions = steps / lengths[:, None]
        turn_pairs = directions[:-1], directions[1:]
        if path.closed:
            turn_pairs = directions, np.roll(directions, -1, axis=0)
        cos_turn = np.sum(turn_pairs[0] * turn_pairs[1], axis=1)
        worst = float(np.max(np.arccos(np.clip(cos_turn, -1.0, 1.0)))) if cos_turn.size else 0.0
        if worst > max_turn_angle:
            raise NumericDomainError(
                f"sampled path is kinked: chord direction jumps by {worst:.3g} rad "
                f"(threshold {max_turn_angle:.3g})"
            )
        knots = np.concatenate([[0.0], np.cumsum(lengths)])
        if knots[-1] < 1e-12:
            raise NumericDomainError("sampled path has (near) zero total length")
        bc = "periodic" if path.closed else "not-a-knot"
        self._spline = CubicSpline(knots, pts, axis=0, bc_type=bc)

        # arc length on a fine grid; 5-point Gauss per interval is effectively
        # exact for a cubic's speed, and PCHIP keeps the inverse monotone
        fine = max(16384, 16 * (len(pts) - 1))
        edges = np.linspace(0.0, knots[-1], fine + 1)
        nodes, weights = np.polynomial.legendre.leggauss(5)
        half = np.diff(edges) / 2.0
        mids = (edges[:-1] + edges[1:]) / 2.0
        u_eval = mids[:, None] + half[:, None] * nodes[None, :]
        speeds = np.linalg.norm(self._spline(u_eval.ravel(), 1), axis=1).reshape(fine, 5)
        if np.any(speeds < 1e-12):
            raise NumericDomainError("sampled path: interpolated tangent vanishes")
        seg = half * (speeds @ weights)
        s_grid = np.concatenate([[0.0], np.cumsum(seg)])
        self.duration = float(s_grid[-1])
        self._u_of_s = PchipInterpolator(s_grid, edges)
        self.breakpoints: tuple[float, ...] = ()

    def tangent(self, ts: np.ndarray) -> np.ndarray:
        u = self._u_of_s(ts)
        d1 = self._spline(u, 1)
        speed = np.linalg.norm(d1, axis=-1, keepdims=True)
        return d1 / speed

    def tangent_rate(self, ts: np.ndarray) -> np.ndarray:
        u = self._u_of_s(ts)
        d1 = self._spline(u, 1)
        d2 = self._spline(u, 2)
        speed_sq = np.sum(d1 * d1, axis=-1, keepdims=True)
        radial = np.sum(d1 * d2, axis=-1, keepdims=True)
        # projection of the curvature vector keeps tangent . rate = 0 exactly
        return d2 / speed_sq - d1 * radial / speed_sq**2


class _SegmentKinematics:
    kind = "segments"

    def __init__(self, path: SegmentPath) -> None:
        tangent = path.start_tangent
        start = 0.0
        records = []
        cuts = []
        for piece in path.pieces:
            if isinstance(piece, Line):
                records.append(("line", start, tangent, None, None))
                start += piece.length
            else:
                if abs(float(np.dot(piece.axis, tangent))) > 1e-9:
                    raise NumericDomainError(
                        "arc axis must be perpendicular to the incoming tangent"
                    )
                normal = np.cross(piece.axis, tangent)
                records.append(("arc", start, tangent, normal, piece.radius))
                sweep = piece.angle
                tangent = math.cos(sweep) * tangent + math.sin(sweep) * normal
                tangent = tangent / np.linalg.norm(tangent)
                start += piece.radius * piece.angle
            cuts.append(start)
        self.duration = start
        self.breakpoints = tuple(cuts[:-1])
        self._records = records
        self._ends = np.asarray(cuts)

    def _piece_index(self, ts: np.ndarray) -> np.ndarray:
        return np.minimum(np.searchsorted(self._ends, ts, side="right"), len(self._records) - 1)

    def tangent(self, ts: np.ndarray) -> np.ndarray:
        out = np.empty(ts.shape + (3,))
        idx = self._piece_index(ts)
        for i, (kind, start, tan, normal, radius) in enumerate(self._records):
            mask = idx == i
            if not np.any(mask):
                continue
            if kind == "line":
                out[mask] = tan
            else:
                phase = (ts[mask] - start) / radius
                out[mask] = np.cos(phase)[..., None] * tan + np.sin(phase)[..., None] * normal
        return out

    def tangent_rate(self, ts: np.ndarray) -> np.ndarray:
        out = np.zeros(ts.shape + (3,))
        idx = self._piece_index(ts)
        for i, (kind, start, tan, normal, radius) in enumerate(self._records):
            mask = idx == i
            if not np.any(mask) or kind == "line":
                continue
            phase = (ts[mask] - start) / radius
            out[mask] = (
                -np.sin(phase)[..., None] * tan + np.cos(phase)[..., None] * normal
            ) / radius
        return out


def _kinematics_for(path: FiberPath, max_turn_angle: float):
    if isinstance(path, Helix):
        return _HelixKinematics(path)
    if isinstance(path, SampledPath):
        return _SplineKinematics(path, max_turn_angle)
    if isinstance(path, SegmentPath):
        return _SegmentKinematics(path)
    raise NumericDomainError(f"unsupported path type {type(path).__name__}")


def _rotation_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Minimal rotation matrix with R u = v, for unit vectors u, v."""
    c = float(np.dot(u, v))
    axis = np.cross(u, v)
    s = float(np.linalg.norm(axis))
    if s < 1e-12:
        if c > 0.0:
            return np.eye(3)
        # antiparallel: half-turn about any perpendicular, fixed deterministically
        helper = np.array([1.0, 0.0, 0.0])
        if abs(u[0]) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        perp = np.cross(u, helper)
        perp /= np.linalg.norm(perp)
        return 2.0 * np.outer(perp, perp) - np.eye(3)
    axis = axis / s
    k = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    theta = math.atan2(s, c)
    return np.eye(3) + math.sin(theta) * k + (1.0 - math.cos(theta)) * (k @ k)


@dataclass(frozen=True, eq=False)
class EffectiveField:
    """Precession field b = khat x dkhat/dt at one instant.

    theta and phi are the spherical angles of the unit direction b_hat;
    they are only meaningful when ``degenerate`` is False.
    """

    b: np.ndarray
    b_hat: np.ndarray
    theta: float
    phi: float
    magnitude: float
    degenerate: bool


@dataclass(frozen=True, eq=False)
class MomentumTrajectory:
    """Momentum direction khat(t) of a path traversed at unit speed.

    The arrays are samples on ``times``; ``khat_at`` and friends evaluate
    the underlying curve at arbitrary times in [0, duration].  ``lam`` is
    the polar angle from +z and ``gamma`` the azimuth, unwrapped along the
    grid.  At isolated samples where khat hits a pole the azimuth takes
    the limiting direction of dkhat/dt, its rate is set to zero, and the
    polar rate to |dkhat/dt|; phase integrals never consume these
    conventions because they use the pole-free Cartesian integrand.
    """

    times: np.ndarray
    khat: np.ndarray
    lam: np.ndarray
    gamma: np.ndarray
    lam_dot: np.ndarray
    gamma_dot: np.ndarray
    frame_rotation: np.ndarray
    duration: float
    wavenumber: float
    breakpoints: tuple[float, ...]
    source_kind: str
    align: str
    min_one_plus_kz: float
    _kin: object = field(repr=False)

    def _batched(self, t, values_fn):
        ts = np.asarray(t, dtype=float)
        scalar = ts.ndim == 0
        ts = np.atleast_1d(ts)
        if not np.all(np.isfinite(ts)):
            raise NumericDomainError("trajectory evaluated at non-finite time")
        clipped = np.clip(ts, 0.0, self.duration)
        out = values_fn(clipped)
        return out[0] if scalar else out

    def khat_at(self, t) -> np.ndarray:
        """Unit momentum direction, shape (..., 3)."""
        return self._batched(t, lambda ts: self._kin.tangent(ts) @ self.frame_rotation.T)

    def khat_dot_at(self, t) -> np.ndarray:
        """Time derivative of the momentum direction, shape (..., 3)."""
        return self._batched(t, lambda ts: self._kin.tangent_rate(ts) @ self.frame_rotation.T)

    def angles_at(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Polar and azimuth angles of khat(t); azimuth branch from atan2."""
        ts = np.asarray(t, dtype=float)
        scalar = ts.ndim == 0
        k = np.atleast_2d(self.khat_at(np.atleast_1d(ts)))
        kd = np.atleast_2d(self.khat_dot_at(np.atleast_1d(ts)))
        lam, gamma = _angles_of(k, kd)
        return (lam[0], gamma[0]) if scalar else (lam, gamma)

    def connection_at(self, t, tolerances: Tolerances = DEFAULT_TOLERANCES):
        """Regularized phase-accumulation rate (kx ky' - ky kx') / (1 + kz).

        Equals gamma_dot (1 - cos lam) wherever the angles are defined and
        stays finite through the north pole.  Raises SouthPoleError when
        evaluated on a moving stretch next to khat_z = -1.
        """

        def values(ts):
            k = self._kin.tangent(ts) @ self.frame_rotation.T
            kd = self._kin.tangent_rate(ts) @ self.frame_rotation.T
            num = k[..., 0] * kd[..., 1] - k[..., 1] * kd[..., 0]
            den = 1.0 + k[..., 2]
            moving = np.linalg.norm(kd, axis=-1) > 1e-15
            if np.any(den[moving] < tolerances.south_pole_margin):
                raise SouthPoleError(
                    "momentum direction touches -z; the phase convention breaks there"
                )
            out = np.zeros_like(den)
            np.divide(num, den, out=out, where=moving)
            return out

        return self._batched(t, values)


def _angles_of(khat: np.ndarray, khat_dot: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lam = np.arccos(np.clip(khat[:, 2], -1.0, 1.0))
    gamma = np.arctan2(khat[:, 1], khat[:, 0])
    at_pole = np.hypot(khat[:, 0], khat[:, 1]) < 1e-12
    if np.any(at_pole):
        # take the azimuth a vanishing transverse part is about to acquire
        gamma = np.where(
            at_pole, np.arctan2(khat_dot[:, 1], khat_dot[:, 0]), gamma
        )
    return lam, gamma


def trajectory_from_path(
    path: FiberPath,
    n_samples: int = 4096,
    *,
    align: str = "initial_tangent",
    max_turn_angle: float = 0.5,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> MomentumTrajectory:
    """Traverse ``path`` at unit speed and extract khat(t) with its angles.

    Parameters
    ----------
    path:
        Helix, SampledPath, or SegmentPath.
    n_samples:
        Size of the stored sample grid (at least 16); evaluation between
        samples goes through the exact kinematics, not interpolation.
    align:
        "initial_tangent" rotates the curve so khat(0) = +z (the default
        initial condition); "none" keeps the raw frame.
    max_turn_angle:
        Kink threshold in radians for sampled paths.
    """
    if int(n_samples) != n_samples or n_samples < 16:
        raise ValueError("n_samples must be an integer >= 16")
    if align not in ("initial_tangent", "none"):
        raise ValueError('align must be "initial_tangent" or "none"')
    kin = _kinematics_for(path, max_turn_angle)
    duration = kin.duration
    first = kin.tangent(np.zeros(1))[0]
    rotation = np.eye(3) if align == "none" else _rotation_between(first, _ZHAT)

    times = np.linspace(0.0, duration, int(n_samples))
    khat = kin.tangent(times) @ rotation.T
    khat_dot = kin.tangent_rate(times) @ rotation.T

    lam, gamma = _angles_of(khat, khat_dot)
    gamma = np.unwrap(gamma)
    perp = np.hypot(khat[:, 0], khat[:, 1])
    speed = np.linalg.norm(khat_dot, axis=1)
    off_pole = perp >= 1e-12
    lam_dot = np.where(off_pole, -khat_dot[:, 2] / np.where(off_pole, perp, 1.0), speed)
    spin = khat[:, 0] * khat_dot[:, 1] - khat[:, 1] * khat_dot[:, 0]
    gamma_dot = np.where(off_pole, spin / np.where(off_pole, perp**2, 1.0), 0.0)

    probe = np.linspace(0.0, duration, max(32768, 8 * int(n_samples)))
    pk = kin.tangent(probe) @ rotation.T
    pkd = kin.tangent_rate(probe) @ rotation.T
    moving = np.linalg.norm(pkd, axis=1) > 1e-15
    floor = 1.0 + pk[moving, 2]
    min_margin = float(np.min(floor)) if floor.size else np.inf

    return MomentumTrajectory(
        times=times,
        khat=khat,
        lam=lam,
        gamma=gamma,
        lam_dot=lam_dot,
        gamma_dot=gamma_dot,
        frame_rotation=rotation,
        duration=duration,
        wavenumber=path.wavenumber,
        breakpoints=kin.breakpoints,
        source_kind=kin.kind,
        align=align,
        min_one_plus_kz=min_margin,
        _kin=kin,
    )


def effective_field(
    traj: MomentumTrajectory,
    t: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> EffectiveField:
    """Precession field b(t) = khat x dkhat/dt with its spherical angles.

    Straight stretches have |b| below the degeneracy threshold; they are
    flagged rather than given arbitrary angles.
    """
    k = traj.khat_at(float(t))
    kd = traj.khat_dot_at(float(t))
    b = np.cross(k, kd)
    magnitude = float(np.linalg.norm(b))
    if magnitude <= tolerances.degenerate_field:
        return EffectiveField(
            b=b, b_hat=np.zeros(3), theta=0.0, phi=0.0, magnitude=magnitude, degenerate=True
        )
    b_hat = b / magnitude
    theta = math.acos(float(np.clip(b_hat[2], -1.0, 1.0)))
    phi = math.atan2(b_hat[1], b_hat[0])
    return EffectiveField(
        b=b, b_hat=b_hat, theta=theta, phi=phi, magnitude=magnitude, degenerate=False
    )


def helix_frequency(radius: float, pitch: float, convention: str = "geometric") -> float:
    """Winding frequency of a helix with the given radius and pitch.

    "geometric" gives the azimuthal rate 2 pi / sqrt(d^2 + (2 pi a)^2) of
    the unit-speed tangent; "four_pi" gives 2 pi / sqrt(d^2 + (4 pi a)^2),
    a variant found in part of the literature and kept for comparison.
    """
    if convention not in OMEGA_CONVENTIONS:
        raise NumericDomainError(
            f"unknown omega convention {convention!r}; expected one of {OMEGA_CONVENTIONS}"
        )
    if not (np.isfinite(radius) and np.isfinite(pitch)) or radius < 0 or pitch < 0:
        raise NumericDomainError("helix radius and pitch must be nonnegative and finite")
    if radius == 0.0 and pitch == 0.0:
        raise NumericDomainError("degenerate helix: radius and pitch are both zero")
    factor = 4.0 * math.pi if convention == "four_pi" else 2.0 * math.pi
    return 2.0 * math.pi / math.hypot(pitch, factor * radius)


def equation_of_motion_residual(traj: MomentumTrajectory) -> float:
    """Worst grid violation of dkhat/dt + khat x (b) = 0 with b = khat x dkhat/dt.

    Exact for a unit-speed curve, so the value measures discretization
    error of the kinematics backend (zero up to roundoff for analytic
    paths, interpolation-limited for sampled ones).
    """
    k = traj.khat_at(traj.times)
    kd = traj.khat_dot_at(traj.times)
    residual = kd + np.cross(k, np.cross(k, kd))
    return float(np.max(np.linalg.norm(residual, axis=1)))


def spherical_orthogonality_residual(
    traj: MomentumTrajectory, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """Worst grid violation of the spherical-angle form of b . khat = 0.

    Evaluates cos(lam) cos(theta) + sin(lam) sin(theta) cos(gamma - phi)
    at every sample where the field is non-degenerate.  The combination
    is an identity for the unit field direction, so the residual should
    sit at roundoff for any smooth path.
    """
    k = traj.khat_at(traj.times)
    kd = traj.khat_dot_at(traj.times)
    b = np.cross(k, kd)
    mag = np.linalg.norm(b, axis=1)
    live = mag > tolerances.degenerate_field
    if not np.any(live):
        return 0.0
    b_hat = b[live] / mag[live, None]
    cos_theta = np.clip(b_hat[:, 2], -1.0, 1.0)
    sin_theta = np.hypot(b_hat[:, 0], b_hat[:, 1])
    phi = np.arctan2(b_hat[:, 1], b_hat[:, 0])
    cos_lam = np.clip(k[live, 2], -1.0, 1.0)
    sin_lam = np.hypot(k[live, 0], k[live, 1])
    gamma = np.arctan2(k[live, 1], k[live, 0])
    value = cos_lam * cos_theta + sin_lam * sin_theta * np.cos(gamma - phi)
    return float(np.max(np.abs(value)))
