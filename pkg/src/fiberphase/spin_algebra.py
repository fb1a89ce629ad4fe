"""Dense operator algebra for small angular-momentum representations.

Everything here is plain numpy.  A representation is a bundle of small
complex matrices in the J3 eigenbasis (eigenvalues descending from j to
-j, standard positive ladder phases), built once and treated as
immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NumericDomainError

__all__ = [
    "AngularMomentumRep",
    "angular_momentum",
    "mat_exp",
    "rotation_to_direction",
    "direction_operator",
    "max_entry_norm",
    "is_hermitian",
    "is_anti_hermitian",
    "is_unitary",
]


def max_entry_norm(m: np.ndarray) -> float:
    """Largest entry magnitude, the norm used for operator identities."""
    return float(np.max(np.abs(m)))


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOLERANCES.algebra) -> bool:
    return max_entry_norm(m - m.conj().T) <= tol


def is_anti_hermitian(m: np.ndarray, tol: float = DEFAULT_TOLERANCES.algebra) -> bool:
    return max_entry_norm(m + m.conj().T) <= tol


def is_unitary(m: np.ndarray, tol: float = DEFAULT_TOLERANCES.algebra) -> bool:
    return max_entry_norm(m.conj().T @ m - np.eye(m.shape[0])) <= tol


@dataclass(frozen=True, eq=False)
class AngularMomentumRep:
    """Matrices J1, J2, J3 and the ladder pair for one spin-j value."""

    j: float
    dim: int
    J1: np.ndarray
    J2: np.ndarray
    J3: np.ndarray
    Jplus: np.ndarray
    Jminus: np.ndarray

    @property
    def sigmas(self) -> tuple[float, ...]:
        """J3 eigenvalues in basis order, j down to -j."""
        return tuple(float(s) for s in np.real(np.diag(self.J3)))

    def operator_stack(self) -> np.ndarray:
        """(3, dim, dim) stack of J1, J2, J3, for contracting with vectors."""
        return np.stack([self.J1, self.J2, self.J3])

    def sigma_index(self, sigma: float) -> int:
        """Basis index of the J3 eigenvalue ``sigma``."""
        pos = self.j - sigma
        idx = int(round(pos))
        if abs(pos - idx) > 1e-9 or not 0 <= idx < self.dim:
            raise NumericDomainError(
                f"sigma={sigma} is not a J3 eigenvalue of the j={self.j} representation"
            )
        return idx

    def basis_state(self, sigma: float) -> np.ndarray:
        """Coefficient vector of the J3 eigenstate with eigenvalue ``sigma``."""
        state = np.zeros(self.dim, dtype=complex)
        state[self.sigma_index(sigma)] = 1.0
        return state


def angular_momentum(j: float) -> AngularMomentumRep:
    """Build the spin-j representation from the ladder construction.

    ``j`` must be a positive integer or half-integer.  The photon sector
    used elsewhere in the package is j = 1, whose physical rows are the
    helicities sigma = +1 and -1.
    """
    jf = float(j)
    two_j = round(2 * jf) if np.isfinite(jf) else -1
    if two_j < 1 or abs(2 * jf - two_j) > 1e-9:
        raise NumericDomainError(f"invalid spin j={j}: expected a positive half-integer")
    jv = two_j / 2.0
    dim = two_j + 1
    m = jv - np.arange(dim)
    raising = np.sqrt(jv * (jv + 1) - m[1:] * (m[1:] + 1))  # <m+1| J+ |m>
    jplus = np.zeros((dim, dim), dtype=complex)
    jplus[np.arange(dim - 1), np.arange(1, dim)] = raising
    jminus = jplus.conj().T
    j1 = (jplus + jminus) / 2.0
    j2 = (jplus - jminus) / 2.0j
    j3 = np.diag(m).astype(complex)
    return AngularMomentumRep(jv, dim, j1, j2, j3, jplus, jminus)


def mat_exp(m: np.ndarray) -> np.ndarray:
    """exp(m) for a small dense matrix, by scaling and squaring.

    The scaled Taylor series is summed until the next term falls at
    machine epsilon relative to the partial sum, so an anti-hermitian
    argument yields a unitary result to roundoff.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NumericDomainError("mat_exp expects a square matrix")
    if not np.all(np.isfinite(m)):
        raise NumericDomainError("mat_exp: matrix has non-finite entries")
    dim = m.shape[0]
    bound = max_entry_norm(m) * dim if m.size else 0.0
    squarings = int(np.ceil(np.log2(bound))) + 1 if bound > 0.5 else 0
    scaled = m / (2.0**squarings)
    result = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    eps = np.finfo(float).eps
    for order in range(1, 64):
        term = term @ scaled / order
        result = result + term
        if max_entry_norm(term) <= eps * max_entry_norm(result):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def rotation_to_direction(rep: AngularMomentumRep, lam: float, gamma: float) -> np.ndarray:
    """Unitary rotation carrying the z axis onto the direction (lam, gamma).

    Conjugation with the result maps the direction operator onto J3:
    with khat = (sin lam cos gamma, sin lam sin gamma, cos lam),
    V^dag (khat . J) V = J3.  lam is the polar angle, gamma the azimuth;
    the 2 pi periodicity in gamma makes the branch of the azimuth
    irrelevant.
    """
    if not (np.isfinite(lam) and np.isfinite(gamma)):
        raise NumericDomainError("rotation_to_direction: angles must be finite")
    beta = -(lam / 2.0) * np.exp(-1j * gamma)
    return mat_exp(beta * rep.Jplus - np.conj(beta) * rep.Jminus)


def direction_operator(
    rep: AngularMomentumRep,
    unit_vector: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """n . J for a unit vector n.  Hermitian with eigenvalues j ... -j."""
    n = np.asarray(unit_vector, dtype=float)
    if n.shape != (3,):
        raise NumericDomainError("direction_operator expects a 3-vector")
    if not np.all(np.isfinite(n)):
        raise NumericDomainError("direction_operator: non-finite vector")
    if abs(np.linalg.norm(n) - 1.0) > tolerances.unit_vector:
        raise NumericDomainError("direction_operator: vector is not unit length")
    return n[0] * rep.J1 + n[1] * rep.J2 + n[2] * rep.J3
