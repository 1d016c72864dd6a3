"""
Fixed-dimension (d=3) complex linear algebra.

Vectors are complex arrays of shape (3,) in the {|1>,|2>,|3>} reference
basis, operators are complex arrays of shape (3, 3). Everything returned
from this module is read-only.
"""

import logging
from typing import Optional

import numpy as np

from modules import config
from modules.errors import DegenerateOverlap, NotHermitian, NotPositive, TraceNotOne

logger = logging.getLogger(__name__)

DIM = 3

# Aliases used in signatures across the package
StateVector = np.ndarray
DensityMatrix = np.ndarray
OperatorMatrix = np.ndarray


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128)
    array.setflags(write=False)
    return array


def ket(*amplitudes: complex) -> StateVector:
    """Normalized vector from (unnormalized) reference-basis amplitudes."""
    vec = np.asarray(amplitudes, dtype=np.complex128).reshape(DIM)
    norm = np.linalg.norm(vec)
    if norm < config.TOLERANCE:
        raise ValueError("cannot normalize a zero vector")
    return _frozen(vec / norm)


def basis(index: int) -> StateVector:
    """Reference basis vector |index>, index in 1..3."""
    vec = np.zeros(DIM, dtype=np.complex128)
    vec[index - 1] = 1.0
    return _frozen(vec)


def inner(u: StateVector, v: StateVector) -> complex:
    """<u|v>, conjugate-linear in u."""
    return complex(np.vdot(u, v))


def projector(v: StateVector) -> OperatorMatrix:
    return _frozen(np.outer(v, np.conj(v)))


def lambda_op(a: StateVector, b: StateVector, tol: Optional[float] = None) -> OperatorMatrix:
    """Lambda(a,b) = |a><b| / <b|a>."""
    tol = config.TOLERANCE if tol is None else tol
    overlap = inner(b, a)
    if abs(overlap) <= tol:
        raise DegenerateOverlap(f"<b|a> = {abs(overlap):.3e}, Lambda(a,b) is undefined")
    return _frozen(np.outer(a, np.conj(b)) / overlap)


def expectation(rho: DensityMatrix, op: OperatorMatrix) -> complex:
    """Tr(rho op)."""
    return complex(np.trace(rho @ op))


def born(rho: DensityMatrix, v: StateVector) -> float:
    """Born probability <v|rho|v>."""
    return float(np.real(np.vdot(v, rho @ v)))


def pure_density(v: StateVector) -> DensityMatrix:
    return projector(v)


def maximally_mixed() -> DensityMatrix:
    return _frozen(np.eye(DIM) / DIM)


def hermiticity_deviation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - np.conj(m).T)))


def is_hermitian(m: np.ndarray, tol: Optional[float] = None) -> bool:
    tol = config.TOLERANCE if tol is None else tol
    return hermiticity_deviation(m) <= tol


def eigenvalues(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (only the Hermitian part is read)."""
    m = np.asarray(m, dtype=np.complex128)
    return np.linalg.eigvalsh((m + np.conj(m).T) / 2)


def validate_density(
    m: np.ndarray,
    tol: Optional[float] = None,
    psd_tol: Optional[float] = None,
) -> DensityMatrix:
    """Return m as a density matrix or raise the first failing diagnosis."""
    tol = config.TOLERANCE if tol is None else tol
    psd_tol = config.PSD_TOLERANCE if psd_tol is None else psd_tol
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (DIM, DIM):
        raise ValueError(f"expected a {DIM}x{DIM} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")

    deviation = hermiticity_deviation(m)
    if deviation > tol:
        raise NotHermitian(deviation)

    trace = complex(np.trace(m))
    if abs(trace - 1.0) > tol:
        raise TraceNotOne(trace)

    lowest = float(eigenvalues(m)[0])
    if lowest < -psd_tol:
        logger.debug(f"Rejecting state with eigenvalue {lowest:.3e}")
        raise NotPositive(lowest, matrix=_frozen(m))

    return _frozen(m)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the sum of absolute eigenvalues of a - b."""
    return float(0.5 * np.sum(np.abs(eigenvalues(np.asarray(a) - np.asarray(b)))))
