"""Helicity of light in a bent fiber and where it flips sign.

In a curved fiber the conserved projection of angular momentum is not
along khat but along the modified direction

    K = k (sin(lam) cos(gamma), sin(lam) sin(gamma),
           cos(lam) - (gamma_dot / k)(1 - cos(lam))),

whose magnitude is zeta * k.  For gamma_dot / k -> 0 this collapses back
to K = k khat, the usual helicity axis.  When the fiber winds fast on
the scale of the wavelength (gamma_dot / k large) the z-component turns
negative and the helicity expectation of a sigma mode approaches -sigma:
the polarization handedness reads out inverted.

Two independent evaluation routes are kept deliberately separate: the
closed-form expectation below, and the matrix expectation built from the
operator K_hat . J.  Tests require them to agree to near roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NumericDomainError
from .spin_algebra import AngularMomentumRep, direction_operator

__all__ = [
    "helicity_vector",
    "zeta",
    "helicity_expectation_closed",
    "helicity_expectation_invariant_mode",
    "helicity_expectation_matrix",
    "InversionScan",
    "inversion_scan",
]


def _check_wavenumber(k: float) -> None:
    if not (np.isfinite(k) and k > 0):
        raise NumericDomainError("wavenumber must be positive and finite")


def helicity_vector(lam, gamma, gamma_dot, wavenumber: float) -> np.ndarray:
    """Conserved angular-momentum direction K, shape (..., 3).

    Scalar arguments give a single vector; array arguments broadcast.
    """
    _check_wavenumber(wavenumber)
    lam = np.asarray(lam, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    x = np.asarray(gamma_dot, dtype=float) / wavenumber
    sin_lam = np.sin(lam)
    cos_lam = np.cos(lam)
    return wavenumber * np.stack(
        np.broadcast_arrays(
            sin_lam * np.cos(gamma),
            sin_lam * np.sin(gamma),
            cos_lam - x * (1.0 - cos_lam),
        ),
        axis=-1,
    )


def zeta(lam, gamma_dot, wavenumber: float):
    """Magnitude ratio |K| / k.

    Evaluates sqrt(1 - 2 (gamma_dot/k)(1 - cos lam) cos lam
    + (gamma_dot/k)^2 (1 - cos lam)^2) as printed, rather than |K|/k from
    the vector, so the two routes stay independent cross-checks.  The
    radicand is clipped at zero against cancellation noise where zeta
    itself vanishes.
    """
    _check_wavenumber(wavenumber)
    cos_lam = np.cos(np.asarray(lam, dtype=float))
    x = np.asarray(gamma_dot, dtype=float) / wavenumber
    one_minus = 1.0 - cos_lam
    radicand = 1.0 - 2.0 * x * one_minus * cos_lam + (x * one_minus) ** 2
    out = np.sqrt(np.maximum(radicand, 0.0))
    return float(out) if out.ndim == 0 else out


def _check_sigma(sigma) -> None:
    if sigma not in (+1, -1):
        raise NumericDomainError("sigma must be +1 or -1")


def helicity_expectation_closed(lam, gamma_dot_over_k, sigma):
    """Helicity expectation sigma [cos lam - x (1 - cos lam)] / zeta, x = gamma_dot/k.

    This is the expectation of K_hat . J in the J3 eigenstate |sigma>,
    the state the light is launched in before the bend starts acting.
    It lies in [-1, 1], crosses zero on the curve cos lam = x (1 - cos lam),
    and tends to -sigma as x -> infinity: the helicity inversion.
    """
    _check_sigma(sigma)
    lam = np.asarray(lam, dtype=float)
    x = np.asarray(gamma_dot_over_k, dtype=float)
    cos_lam = np.cos(lam)
    z = zeta(lam, x, 1.0)
    if np.any(np.asarray(z) == 0.0):
        raise NumericDomainError("helicity undefined: K vanishes at a requested point")
    out = sigma * (cos_lam - x * (1.0 - cos_lam)) / z
    return float(out) if out.ndim == 0 else out


def helicity_expectation_invariant_mode(lam, gamma_dot_over_k, sigma):
    """Secondary diagnostic: expectation in the khat-locked mode, not |sigma>.

    Taking the state to be the instantaneous eigenstate of khat . J with
    eigenvalue sigma gives sigma (K_hat . khat) instead, i.e.
    sigma [1 - x (1 - cos lam) cos lam] / zeta.  This alternative reading
    is exposed for comparison only; the headline numbers come from
    helicity_expectation_closed.
    """
    _check_sigma(sigma)
    lam = np.asarray(lam, dtype=float)
    x = np.asarray(gamma_dot_over_k, dtype=float)
    cos_lam = np.cos(lam)
    z = zeta(lam, x, 1.0)
    if np.any(np.asarray(z) == 0.0):
        raise NumericDomainError("helicity undefined: K vanishes at a requested point")
    out = sigma * (1.0 - x * (1.0 - cos_lam) * cos_lam) / z
    return float(out) if out.ndim == 0 else out


def helicity_expectation_matrix(
    rep: AngularMomentumRep,
    state: np.ndarray,
    helicity_vec: np.ndarray,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Expectation <state| K_hat . J |state> by dense matrix algebra.

    Independent of every closed form above: the operator is assembled
    from the representation matrices and sandwiched directly.
    """
    vec = np.asarray(helicity_vec, dtype=float)
    if vec.shape != (3,) or not np.all(np.isfinite(vec)):
        raise NumericDomainError("helicity vector must be a finite 3-vector")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise NumericDomainError("helicity undefined: K vanishes")
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (rep.dim,):
        raise NumericDomainError(f"state has shape {psi.shape}, expected ({rep.dim},)")
    if abs(float(np.linalg.norm(psi)) - 1.0) > tolerances.state_norm:
        raise NumericDomainError("state must be normalized")
    op = direction_operator(rep, vec / norm, tolerances=tolerances)
    value = complex(psi.conj() @ op @ psi)
    if abs(value.imag) > 1e-12:
        raise NumericDomainError(f"expectation acquired imaginary part {value.imag:.3g}")
    return value.real


@dataclass(frozen=True, eq=False)
class InversionScan:
    """Flattened parameter grid with helicity readouts per point.

    ``columns`` is the serialization order of the primary table; every
    named column lives in ``values`` (flags as booleans).  Secondary
    diagnostics: the invariant-mode expectations, the analytic zero
    crossing of the expectation numerator per distinct polar angle
    (infinite when the angle is 0), and index pairs of adjacent grid rows
    that bracket a sign change of the numerator within one sweep block.
    """

    mode: str
    columns: tuple[str, ...]
    values: dict[str, np.ndarray]
    diagnostic_columns: tuple[str, ...]
    crossing_brackets: tuple[tuple[int, int], ...]
    analytic_crossing: dict[float, float] = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        return len(self.values[self.columns[0]])


def _axis_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise NumericDomainError(f"scan axis {name!r} must be a non-empty 1-d array")
    if not np.all(np.isfinite(arr)):
        raise NumericDomainError(f"scan axis {name!r} has non-finite entries")
    return arr


def inversion_scan(
    *,
    lam=None,
    gamma_dot_over_k=None,
    radius=None,
    pitch=None,
    wavenumber: float = 1.0,
    omega_convention: str = "geometric",
) -> InversionScan:
    """Closed-form helicity over a parameter grid, flagging inversions.

    Two grid flavors: angles (``lam`` x ``gamma_dot_over_k``, outer x
    inner) or helix dimensions (``radius`` x ``pitch``), the latter
    mapped through lam = arctan(2 pi a / d) and the winding frequency of
    the chosen convention divided by the wavenumber.  A point is flagged
    inverted when expectation * sigma < 0 strictly.
    """
    angle_mode = lam is not None or gamma_dot_over_k is not None
    helix_mode = radius is not None or pitch is not None
    if angle_mode == helix_mode:
        raise NumericDomainError(
            "scan needs exactly one grid flavor: (lam, gamma_dot_over_k) or (radius, pitch)"
        )

    if angle_mode:
        if lam is None or gamma_dot_over_k is None:
            raise NumericDomainError("angle scan needs both lam and gamma_dot_over_k axes")
        outer = _axis_array(lam, "lam")
        inner = _axis_array(gamma_dot_over_k, "gamma_dot_over_k")
        lam_grid = np.repeat(outer, inner.size)
        x_grid = np.tile(inner, outer.size)
        lead = {"lambda": lam_grid, "gamma_dot_over_k": x_grid}
        columns = ("gamma_dot_over_k", "lambda")
        mode = "angle_rate"
    else:
        if radius is None or pitch is None:
            raise NumericDomainError("helix scan needs both radius and pitch axes")
        from .fiber_geometry import helix_frequency  # local import breaks a cycle

        outer = _axis_array(radius, "radius")
        inner = _axis_array(pitch, "pitch")
        if np.any(outer <= 0) or np.any(inner < 0):
            raise NumericDomainError("helix scan needs radius > 0 and pitch >= 0")
        a_grid = np.repeat(outer, inner.size)
        d_grid = np.tile(inner, outer.size)
        lam_grid = np.arctan2(2.0 * math.pi * a_grid, d_grid)
        _check_wavenumber(wavenumber)
        omega = np.array(
            [helix_frequency(a, d, omega_convention) for a, d in zip(a_grid, d_grid)]
        )
        x_grid = omega / wavenumber
        lead = {"a": a_grid, "d": d_grid}
        columns = ("a", "d")
        mode = "helix_dimensions"

    z = zeta(lam_grid, x_grid, 1.0)
    plus = helicity_expectation_closed(lam_grid, x_grid, +1)
    minus = helicity_expectation_closed(lam_grid, x_grid, -1)
    values: dict[str, np.ndarray] = dict(lead)
    values["zeta"] = np.atleast_1d(z)
    values["expectation_plus"] = np.atleast_1d(plus)
    values["expectation_minus"] = np.atleast_1d(minus)
    values["inverted_plus"] = np.atleast_1d(plus) < 0.0
    values["inverted_minus"] = np.atleast_1d(minus) > 0.0
    values["alt_expectation_plus"] = np.atleast_1d(
        helicity_expectation_invariant_mode(lam_grid, x_grid, +1)
    )
    values["alt_expectation_minus"] = np.atleast_1d(
        helicity_expectation_invariant_mode(lam_grid, x_grid, -1)
    )

    numerator = np.cos(lam_grid) - x_grid * (1.0 - np.cos(lam_grid))
    brackets = []
    block = inner.size
    for start in range(0, numerator.size, block):
        seg = numerator[start : start + block]
        flips = np.nonzero(np.sign(seg[:-1]) * np.sign(seg[1:]) < 0)[0]
        brackets.extend((start + int(i), start + int(i) + 1) for i in flips)

    # keys are exact grid values (repeats are bit-identical), so rows
    # can look their angle up without any rounding convention
    crossing = {}
    for ang in np.unique(lam_grid):
        c = math.cos(float(ang))
        crossing[float(ang)] = math.inf if c >= 1.0 - 1e-15 else c / (1.0 - c)

    full_columns = columns + (
        "zeta",
        "expectation_plus",
        "expectation_minus",
        "inverted_plus",
        "inverted_minus",
    )
    return InversionScan(
        mode=mode,
        columns=full_columns,
        values=values,
        diagnostic_columns=("alt_expectation_plus", "alt_expectation_minus"),
        crossing_brackets=tuple(brackets),
        analytic_crossing=crossing,
    )
