"""Exact polarization evolution along a bent fiber.

The momentum direction khat(t) is an invariant direction for the
precession generated by b = khat x dkhat/dt: the operator khat(t).J
satisfies the invariant equation dI/dt + (1/i)[I, b.J] = 0.  Rotating
into the frame where that invariant is diagonal turns the generator into
rate(t) J3 with rate = gamma_dot (1 - cos lam), so the propagator needs
no chronological ordering:

    U(t) = V(t) exp(-i Phi(t) J3) V(0)^dagger,   Phi(t) = integral of rate.

Everything here either builds that closed form or checks it against a
brute-force time-ordered product and the invariant equation itself.

Phase sign convention: a mode with J3 eigenvalue sigma accumulates the
factor exp(-i sigma Phi); we report the accumulated angle sigma * Phi,
positive for sigma = +1 on a right-handed helix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NumericDomainError, SouthPoleError
from .fiber_geometry import MomentumTrajectory
from .spin_algebra import AngularMomentumRep, max_entry_norm, rotation_to_direction

__all__ = [
    "PhaseCurve",
    "EvolutionResult",
    "geometric_phase",
    "vacuum_phase",
    "dynamical_phase_residual",
    "phase_curve",
    "precession_hamiltonian",
    "analytic_propagator",
    "oracle_propagator",
    "evolve_state",
    "evolve",
    "invariant_residual",
    "rotating_frame_residual",
]


def _reject_south_pole(traj: MomentumTrajectory, tolerances: Tolerances) -> None:
    if traj.min_one_plus_kz < tolerances.south_pole_margin:
        raise SouthPoleError(
            "trajectory passes within the margin of khat = -z; the phase "
            "chart silently drops 2 pi there, so the phase is not defined"
        )


def _adaptive_simpson(f, a: float, b: float, abs_tol: float, max_depth: int = 48) -> float:
    """Adaptive Simpson quadrature with Richardson refinement of each panel."""
    if b <= a:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_split(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)


def _simpson_split(f, a, b, fa, fm, fb, whole, tol, depth) -> float:
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _simpson_split(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _simpson_split(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )


def _integrate_piecewise(f, a: float, b: float, cuts, abs_tol: float) -> float:
    """Integrate f over [a, b], splitting panels at interior breakpoints."""
    if b <= a:
        return 0.0
    edges = [a] + [c for c in cuts if a < c < b] + [b]
    share = abs_tol / (len(edges) - 1)
    return sum(
        _adaptive_simpson(f, lo, hi, share) for lo, hi in zip(edges[:-1], edges[1:])
    )


def geometric_phase(
    traj: MomentumTrajectory,
    t: float,
    *,
    t_start: float = 0.0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Accumulated solid-angle phase Phi(t) = integral of gamma_dot (1 - cos lam).

    The integrand is evaluated in its regularized Cartesian form
    (kx ky' - ky kx') / (1 + kz), which agrees with the angular form away
    from the poles and stays finite through khat = +z.  Raises
    SouthPoleError if the trajectory comes within the configured margin
    of khat = -z anywhere: near that point the chart drops a 2 pi phase
    silently, so no quadrature across it can be trusted, even one whose
    nodes happen to miss the pole.  ``t_start`` restarts the integral
    mid-run; Phi(0, t) = Phi(0, s) + Phi(s, t) holds to the quadrature
    tolerance.
    """
    t = float(t)
    t_start = float(t_start)
    if not (0.0 <= t_start <= t <= traj.duration + 1e-12):
        raise NumericDomainError(
            f"need 0 <= t_start <= t <= {traj.duration}, got ({t_start}, {t})"
        )
    _reject_south_pole(traj, tolerances)

    def rate(u: float) -> float:
        return float(traj.connection_at(u, tolerances))

    return _integrate_piecewise(
        rate, t_start, min(t, traj.duration), traj.breakpoints, tolerances.quadrature_abs
    )


def vacuum_phase(
    traj: MomentumTrajectory,
    t: float,
    sign: int,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Half-quantum phase +Phi/2 or -Phi/2 carried by the two vacuum modes.

    The two signs cancel exactly in the sum; that cancellation is the
    observable statement, and callers get it by construction here.
    """
    if sign not in (+1, -1):
        raise NumericDomainError("vacuum mode sign must be +1 or -1")
    return 0.5 * sign * geometric_phase(traj, t, tolerances=tolerances)


def dynamical_phase_residual(
    traj: MomentumTrajectory,
    t: float,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Integral of cos(lam)cos(theta) + sin(lam)sin(theta)cos(gamma - phi).

    (lam, gamma) are the angles of khat and (theta, phi) those of the unit
    precession-field direction.  The combination is khat . b_hat, which
    vanishes identically because b = khat x dkhat/dt is perpendicular to
    khat; the integral is returned as a residual diagnostic, not
    subtracted from any phase.  Degenerate stretches (b = 0) contribute
    zero by convention.
    """
    t = float(t)
    if not (0.0 <= t <= traj.duration + 1e-12):
        raise NumericDomainError(f"time {t} outside the trajectory range [0, {traj.duration}]")

    def integrand(u: float) -> float:
        k = traj.khat_at(u)
        kd = traj.khat_dot_at(u)
        b = np.cross(k, kd)
        mag = float(np.linalg.norm(b))
        if mag <= tolerances.degenerate_field:
            return 0.0
        b_hat = b / mag
        cos_lam = float(np.clip(k[2], -1.0, 1.0))
        sin_lam = math.hypot(k[0], k[1])
        gamma = math.atan2(k[1], k[0])
        cos_theta = float(np.clip(b_hat[2], -1.0, 1.0))
        sin_theta = math.hypot(b_hat[0], b_hat[1])
        phi = math.atan2(b_hat[1], b_hat[0])
        return cos_lam * cos_theta + sin_lam * sin_theta * math.cos(gamma - phi)

    return _integrate_piecewise(
        integrand, 0.0, min(t, traj.duration), traj.breakpoints, tolerances.quadrature_abs
    )


@dataclass(frozen=True, eq=False)
class PhaseCurve:
    """Cumulative phase Phi on a time grid, with the per-mode readouts.

    phi[i] integrates the connection from times[0] to times[i], interval
    by interval, so the curve is additive by construction.
    """

    times: np.ndarray
    rate: np.ndarray
    phi: np.ndarray
    sigmas: tuple[float, ...]
    dynamical_residual: float

    def mode_phase(self, sigma: float) -> np.ndarray:
        """Accumulated angle sigma * Phi of the J3 eigenmode sigma."""
        if not any(abs(sigma - s) < 1e-12 for s in self.sigmas):
            raise NumericDomainError(f"sigma={sigma} is not a mode of this curve")
        return sigma * self.phi

    @property
    def phase_per_sigma(self) -> dict[float, np.ndarray]:
        return {s: s * self.phi for s in self.sigmas}

    def vacuum_phase(self, sign: int) -> np.ndarray:
        if sign not in (+1, -1):
            raise NumericDomainError("vacuum mode sign must be +1 or -1")
        return 0.5 * sign * self.phi

    @property
    def vacuum_phase_sum(self) -> np.ndarray:
        """Sum of the two vacuum half-phases; identically zero."""
        return self.vacuum_phase(+1) + self.vacuum_phase(-1)


def phase_curve(
    traj: MomentumTrajectory,
    rep: AngularMomentumRep | None = None,
    n_times: int = 129,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> PhaseCurve:
    """Cumulative Phi on a uniform grid of n_times points over the run.

    Passing a representation labels the mode readouts with its sigma
    ladder; without one the photon values (+1, -1) are used.
    """
    if n_times < 2:
        raise NumericDomainError("phase curve needs at least 2 time points")
    _reject_south_pole(traj, tolerances)
    times = np.linspace(0.0, traj.duration, int(n_times))
    rate = np.asarray(traj.connection_at(times, tolerances))

    def f(u: float) -> float:
        return float(traj.connection_at(u, tolerances))

    share = tolerances.quadrature_abs / (len(times) - 1)
    steps = [
        _integrate_piecewise(f, float(a), float(b), traj.breakpoints, share)
        for a, b in zip(times[:-1], times[1:])
    ]
    phi = np.concatenate([[0.0], np.cumsum(steps)])
    sigmas = rep.sigmas if rep is not None else (1.0, -1.0)
    residual = dynamical_phase_residual(traj, traj.duration, tolerances=tolerances)
    return PhaseCurve(
        times=times,
        rate=rate,
        phi=phi,
        sigmas=tuple(float(s) for s in sigmas),
        dynamical_residual=float(residual),
    )


def precession_hamiltonian(rep: AngularMomentumRep, b: np.ndarray) -> np.ndarray:
    """Generator b . J for a precession field b (not normalized)."""
    b = np.asarray(b, dtype=float)
    if b.shape != (3,) or not np.all(np.isfinite(b)):
        raise NumericDomainError("precession field must be a finite 3-vector")
    return np.einsum("i,ijk->jk", b, rep.operator_stack())


def _field_at(traj: MomentumTrajectory, t: float) -> np.ndarray:
    k = traj.khat_at(t)
    kd = traj.khat_dot_at(t)
    return np.cross(k, kd)


def _assert_unitary(u: np.ndarray, tolerances: Tolerances, label: str) -> None:
    defect = max_entry_norm(u.conj().T @ u - np.eye(u.shape[0]))
    if defect > tolerances.propagator_unitarity:
        raise NumericDomainError(f"{label} lost unitarity (defect {defect:.3g})")


def analytic_propagator(
    rep: AngularMomentumRep,
    traj: MomentumTrajectory,
    t: float,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Closed-form propagator U(t) = V(t) exp(-i Phi(t) J3) V(0)^dagger.

    No chronological ordering appears: the rotating-frame generator is
    proportional to the constant J3.  With the default trajectory
    alignment V(0) = I and the trailing factor is the identity; a raw
    (unaligned) frame is normalized to U(0) = I by that constant factor.
    """
    phi = geometric_phase(traj, t, tolerances=tolerances)
    lam1, gam1 = traj.angles_at(float(t))
    v1 = rotation_to_direction(rep, float(lam1), float(gam1))
    core = np.exp(-1j * phi * np.asarray(rep.sigmas))
    u = v1 * core[None, :]
    lam0, gam0 = traj.angles_at(0.0)
    if abs(float(lam0)) > 1e-12:
        v0 = rotation_to_direction(rep, float(lam0), float(gam0))
        u = u @ v0.conj().T
    _assert_unitary(u, tolerances, "analytic propagator")
    return u


def _axis_angle_steps(rep: AngularMomentumRep, axes: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Stack of exp(-i angle (axis . J)) for unit axes, vectorized per dim."""
    n = axes.shape[0]
    dim = rep.dim
    stack = rep.operator_stack()
    proj = np.einsum("ni,ijk->njk", axes, stack)
    eye = np.broadcast_to(np.eye(dim, dtype=complex), (n, dim, dim))
    if dim == 2:
        half = 0.5 * angles
        return np.cos(half)[:, None, None] * eye - 2j * np.sin(half)[:, None, None] * proj
    if dim == 3:
        proj2 = proj @ proj
        return (
            eye
            - 1j * np.sin(angles)[:, None, None] * proj
            + (np.cos(angles) - 1.0)[:, None, None] * proj2
        )
    out = np.empty((n, dim, dim), dtype=complex)
    for i in range(n):
        out[i] = scipy.linalg.expm(-1j * angles[i] * proj[i])
    return out


def _chronological_product(mats: np.ndarray) -> np.ndarray:
    """Product M[n-1] @ ... @ M[0] by pairwise tree reduction."""
    while mats.shape[0] > 1:
        m = mats.shape[0] // 2
        paired = mats[1 : 2 * m : 2] @ mats[0 : 2 * m : 2]
        if mats.shape[0] % 2:
            paired = np.concatenate([paired, mats[-1:]], axis=0)
        mats = paired
    return mats[0]


def oracle_propagator(
    rep: AngularMomentumRep,
    traj: MomentumTrajectory,
    t: float,
    n_steps: int,
    *,
    t0: float = 0.0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Brute-force time-ordered propagator over [t0, t].

    Midpoint exponential integrator: the ordered product, earliest factor
    rightmost, of exp(-i b(t_mid) . J dt) over n_steps equal
    sub-intervals.  Each factor is exactly unitary, so the scheme is
    unconditionally stable and converges at second order in dt.  This
    route never touches the closed-form solution: it is the independent
    check the closed form is measured against.
    """
    if int(n_steps) != n_steps or n_steps < 1:
        raise NumericDomainError("oracle needs n_steps >= 1")
    t = float(t)
    t0 = float(t0)
    if t < t0:
        raise NumericDomainError("oracle interval is reversed")
    if t == t0:
        return np.eye(rep.dim, dtype=complex)
    dt = (t - t0) / n_steps
    mids = t0 + dt * (np.arange(n_steps) + 0.5)
    k = np.atleast_2d(traj.khat_at(mids))
    kd = np.atleast_2d(traj.khat_dot_at(mids))
    b = np.cross(k, kd)
    mags = np.linalg.norm(b, axis=1)
    safe = np.where(mags > 0.0, mags, 1.0)
    axes = b / safe[:, None]
    angles = np.where(mags > 0.0, mags * dt, 0.0)
    steps = _axis_angle_steps(rep, axes, angles)
    u = _chronological_product(steps)
    _assert_unitary(u, tolerances, "oracle propagator")
    return u


def _coefficients_to_state(rep: AngularMomentumRep, coefficients) -> np.ndarray:
    if isinstance(coefficients, dict):
        state = np.zeros(rep.dim, dtype=complex)
        for sigma, value in coefficients.items():
            state[rep.sigma_index(float(sigma))] = value
    else:
        state = np.asarray(coefficients, dtype=complex)
        if state.shape != (rep.dim,):
            raise NumericDomainError(
                f"coefficient vector has shape {state.shape}, expected ({rep.dim},)"
            )
    return state


def evolve_state(
    rep: AngularMomentumRep,
    traj: MomentumTrajectory,
    initial_coefficients,
    t: float,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Propagate an initial mode expansion to time t with the closed form.

    ``initial_coefficients`` is either a map sigma -> amplitude or a
    vector in the descending-sigma basis; it must be normalized.  The
    result is sum_sigma C_sigma exp(-i sigma Phi(t)) V(t)|sigma> as a
    coefficient vector in the fixed J3 basis.
    """
    state = _coefficients_to_state(rep, initial_coefficients)
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > tolerances.state_norm:
        raise NumericDomainError(f"initial coefficients have norm {norm:.12g}, expected 1")
    out = analytic_propagator(rep, traj, t, tolerances=tolerances) @ state
    drift = abs(float(np.linalg.norm(out)) - 1.0)
    if drift > tolerances.propagator_unitarity:
        raise NumericDomainError(f"evolved state norm drifted by {drift:.3g}")
    return out


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    """Closed-form and brute-force evolution side by side on one grid.

    fidelity_deficit is the largest Frobenius distance between the two
    propagator series; invariant_residual is the largest invariant-
    equation violation found on the same grid.
    """

    times: np.ndarray
    u_analytic: np.ndarray
    u_oracle: np.ndarray
    states: np.ndarray
    fidelity_deficit: float
    invariant_residual: float


def evolve(
    rep: AngularMomentumRep,
    traj: MomentumTrajectory,
    initial_coefficients=None,
    *,
    n_times: int = 33,
    oracle_steps: int = 65536,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> EvolutionResult:
    """Run both propagator routes on a uniform grid and compare them.

    The oracle budget is spread evenly across grid intervals and the
    ordered product is accumulated, so u_oracle[i] is a genuine
    time-ordered propagator to times[i].  Default initial state is the
    highest-sigma mode.
    """
    if n_times < 2:
        raise NumericDomainError("evolution grid needs at least 2 time points")
    if initial_coefficients is None:
        initial_coefficients = rep.basis_state(rep.j)
    state0 = _coefficients_to_state(rep, initial_coefficients)
    norm = float(np.linalg.norm(state0))
    if abs(norm - 1.0) > tolerances.state_norm:
        raise NumericDomainError(f"initial coefficients have norm {norm:.12g}, expected 1")

    times = np.linspace(0.0, traj.duration, int(n_times))
    per_interval = max(1, math.ceil(oracle_steps / (n_times - 1)))

    dim = rep.dim
    u_analytic = np.empty((len(times), dim, dim), dtype=complex)
    u_oracle = np.empty_like(u_analytic)
    states = np.empty((len(times), dim), dtype=complex)
    u_analytic[0] = np.eye(dim)
    u_oracle[0] = np.eye(dim)
    states[0] = state0
    acc = np.eye(dim, dtype=complex)
    worst_inv = invariant_residual(rep, traj, 0.0, tolerances=tolerances)
    for i in range(1, len(times)):
        u_analytic[i] = analytic_propagator(rep, traj, float(times[i]), tolerances=tolerances)
        step = oracle_propagator(
            rep, traj, float(times[i]), per_interval, t0=float(times[i - 1]), tolerances=tolerances
        )
        acc = step @ acc
        u_oracle[i] = acc
        states[i] = u_analytic[i] @ state0
        worst_inv = max(worst_inv, invariant_residual(rep, traj, float(times[i]), tolerances=tolerances))

    deficit = float(np.max(np.linalg.norm(u_analytic - u_oracle, axis=(1, 2))))
    return EvolutionResult(
        times=times,
        u_analytic=u_analytic,
        u_oracle=u_oracle,
        states=states,
        fidelity_deficit=deficit,
        invariant_residual=float(worst_inv),
    )


def _clamp_for_stencil(traj: MomentumTrajectory, t: float, h: float) -> float:
    # keep the two-sided stencil inside the trajectory's domain
    return min(max(float(t), h), traj.duration - h)


def invariant_residual(
    rep: AngularMomentumRep,
    traj: MomentumTrajectory,
    t: float,
    *,
    fd_step: float | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Violation of dI/dt + (1/i)[I, b . J] = 0 for I = khat . J.

    The time derivative is a central difference with step fd_step, so the
    value measures O(h^2) truncation plus roundoff rather than any model
    error; it doubles as a consistency check between khat and its rate.
    """
    h = tolerances.fd_step if fd_step is None else float(fd_step)
    if not (0.0 < h < traj.duration / 2.0):
        raise NumericDomainError("finite-difference step must lie in (0, duration/2)")
    t = _clamp_for_stencil(traj, t, h)
    stack = rep.operator_stack()
    i_plus = np.einsum("i,ijk->jk", traj.khat_at(t + h), stack)
    i_minus = np.einsum("i,ijk->jk", traj.khat_at(t - h), stack)
    didt = (i_plus - i_minus) / (2.0 * h)
    i_now = np.einsum("i,ijk->jk", traj.khat_at(t), stack)
    ham = precession_hamiltonian(rep, _field_at(traj, t))
    commutator = i_now @ ham - ham @ i_now
    return max_entry_norm(didt + commutator / 1j)


def rotating_frame_residual(
    rep: AngularMomentumRep,
    traj: MomentumTrajectory,
    t: float,
    *,
    fd_step: float | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Defect of the rotating-frame reduction at time t.

    Checks that V^dagger (b . J) V - i V^dagger dV/dt collapses onto
    rate(t) J3, where rate is the regularized connection and dV/dt is a
    central difference.  This is the identity that removes time ordering
    from the propagator, so the residual is the single most important
    consistency number in the package.
    """
    h = tolerances.fd_step if fd_step is None else float(fd_step)
    if not (0.0 < h < traj.duration / 2.0):
        raise NumericDomainError("finite-difference step must lie in (0, duration/2)")
    t = _clamp_for_stencil(traj, t, h)

    def v_at(u: float) -> np.ndarray:
        lam, gam = traj.angles_at(u)
        return rotation_to_direction(rep, float(lam), float(gam))

    v = v_at(t)
    v_dot = (v_at(t + h) - v_at(t - h)) / (2.0 * h)
    ham = precession_hamiltonian(rep, _field_at(traj, t))
    rotated = v.conj().T @ ham @ v - 1j * (v.conj().T @ v_dot)
    rate = float(traj.connection_at(t, tolerances))
    target = rate * np.diag(np.asarray(rep.sigmas, dtype=complex))
    return max_entry_norm(rotated - target)
