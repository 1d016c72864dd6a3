"""
Five-coefficient state tomography.

A qutrit state is fixed by P(1), P(f) and the three KD terms rho(1,f),
rho(1,D2), rho(D2,f). Those five numbers follow from the five "red" entries
of the (C123, Cf2) KD table, which also fix the three remaining entries.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from modules import config
from modules.errors import InconsistentMarginal
from modules.hilbert import DensityMatrix, born, inner, validate_density
from modules.kd import kd_term
from modules.pentagon import PentagonFrame, canonical_frame

logger = logging.getLogger(__name__)

# (measured outcome c, expansion vector s); sum_j |s_j><c_j| / <c_j|s_j> is the identity
RECONSTRUCTION_PAIRS: Tuple[Tuple[str, str], ...] = (("1", "S2"), ("f", "2"), ("D2", "S1"))

# Change of (rho(3,P2), rho(2,P2), rho(3,S2)) per unit increase of rho(1,f)
COHERENCE_DIRECTION = np.array([0.25, -0.5, -0.75])


@dataclass(frozen=True)
class TomographicData:
    p1: float
    pf: float
    r_1f: complex
    r_1D2: complex
    r_D2f: complex
    # |Im| of the two marginals when built from noisy red entries
    imag_residual: float = 0.0

    def scaled(self, weight: float) -> "TomographicData":
        return TomographicData(
            self.p1 * weight, self.pf * weight, self.r_1f * weight, self.r_1D2 * weight, self.r_D2f * weight
        )

    def __add__(self, other: "TomographicData") -> "TomographicData":
        return TomographicData(
            self.p1 + other.p1,
            self.pf + other.pf,
            self.r_1f + other.r_1f,
            self.r_1D2 + other.r_1D2,
            self.r_D2f + other.r_D2f,
        )


@dataclass(frozen=True)
class RedEntries:
    r_1f: complex
    r_2f: complex
    r_3f: complex
    r_1S2: complex
    r_1P2: complex

    @classmethod
    def zeros(cls) -> "RedEntries":
        return cls(0j, 0j, 0j, 0j, 0j)


class Completion(NamedTuple):
    r_3P2: complex
    r_2P2: complex
    r_3S2: complex


class DerivedProbabilities(NamedTuple):
    p2: float
    pS2: float
    pD2: float
    pS1: float


@dataclass(frozen=True)
class CoherenceShift:
    """Completed entries read as delta * (1/4, -1/2, -3/4)."""

    delta: float
    reference_r_1f: float
    residual: float


def _frame(frame: Optional[PentagonFrame]) -> PentagonFrame:
    return canonical_frame() if frame is None else frame


def extract(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> TomographicData:
    frame = _frame(frame)
    return TomographicData(
        p1=born(rho, frame.vec("1")),
        pf=born(rho, frame.vec("f")),
        r_1f=kd_term(rho, "1", "f", frame),
        r_1D2=kd_term(rho, "1", "D2", frame),
        r_D2f=kd_term(rho, "D2", "f", frame),
    )


def red_from_state(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> RedEntries:
    frame = _frame(frame)
    return RedEntries(
        r_1f=kd_term(rho, "1", "f", frame),
        r_2f=kd_term(rho, "2", "f", frame),
        r_3f=kd_term(rho, "3", "f", frame),
        r_1S2=kd_term(rho, "1", "S2", frame),
        r_1P2=kd_term(rho, "1", "P2", frame),
    )


def reconstruct_matrix(data: TomographicData, frame: Optional[PentagonFrame] = None) -> np.ndarray:
    """Raw non-orthogonal expansion, Hermitian with unit trace, positivity unchecked."""
    frame = _frame(frame)
    c = [frame.vec(a) for a, _ in RECONSTRUCTION_PAIRS]
    s = [frame.vec(b) for _, b in RECONSTRUCTION_PAIRS]
    # <c_j|s_j>
    scale = [inner(cj, sj) for cj, sj in zip(c, s)]

    # m[j, k] = <c_j|rho|c_k> with the rho(D2) diagonal left open
    m = np.zeros((3, 3), dtype=np.complex128)
    m[0, 0] = data.p1
    m[1, 1] = data.pf
    m[0, 1] = data.r_1f / inner(c[1], c[0])
    m[0, 2] = data.r_1D2 / inner(c[2], c[0])
    m[2, 1] = data.r_D2f / inner(c[1], c[2])
    m[1, 0] = np.conj(m[0, 1])
    m[2, 0] = np.conj(m[0, 2])
    m[1, 2] = np.conj(m[2, 1])

    def term(j: int, k: int) -> np.ndarray:
        return np.outer(s[j], np.conj(s[k])) / (scale[j] * np.conj(scale[k]))

    rho = sum(m[j, k] * term(j, k) for j in range(3) for k in range(3))
    # P(D2) from the unit-trace condition
    weight = np.trace(term(2, 2)).real
    p_d2 = (1.0 - np.trace(rho).real) / weight
    rho = rho + p_d2 * term(2, 2)
    return (rho + np.conj(rho).T) / 2


def reconstruct(
    data: TomographicData,
    frame: Optional[PentagonFrame] = None,
    psd_tol: Optional[float] = None,
) -> DensityMatrix:
    """Density matrix for the data; NotPositive (carrying the matrix) for inconsistent data."""
    matrix = reconstruct_matrix(data, frame)
    return validate_density(matrix, psd_tol=psd_tol)


def red_to_data(
    red: RedEntries, strict: bool = True, tol: Optional[float] = None
) -> TomographicData:
    """Marginals and remaining KD terms from the five red entries."""
    tol = config.MARGINAL_TOLERANCE if tol is None else tol
    p1 = red.r_1f + red.r_1S2 + red.r_1P2
    pf = red.r_1f + red.r_2f + red.r_3f
    residual = max(abs(p1.imag), abs(pf.imag))
    if residual > tol:
        if strict:
            name = "P(1)" if abs(p1.imag) >= abs(pf.imag) else "P(f)"
            raise InconsistentMarginal(name, residual)
        logger.warning(f"Marginals of the red entries carry an imaginary part of {residual:.3e}")
    return TomographicData(
        p1=float(p1.real),
        pf=float(pf.real),
        r_1f=complex(red.r_1f),
        r_1D2=complex(red.r_1f + red.r_1P2),
        r_D2f=complex(red.r_1f + red.r_3f),
        imag_residual=float(residual),
    )


def complete_table(red: RedEntries) -> Completion:
    """rho(3,P2), rho(2,P2), rho(3,S2) from the red entries (canonical frame)."""
    r1f, r2f, r3f, r1s2, r1p2 = red.r_1f, red.r_2f, red.r_3f, red.r_1S2, red.r_1P2
    h = 0.25 * (1 + r1f - 3 * r2f - r3f - 2 * r1s2 - 2 * r1p2)
    f = 0.5 * (1 - r1f + r2f - 3 * r3f - 2 * r1s2 + 2 * r1p2)
    g = 0.25 * (1 - 3 * r1f - 3 * r2f + 3 * r3f + 2 * r1s2 - 6 * r1p2)
    # The affine forms fix the real parts; imaginary parts follow from the real P(2), P(S2), P(D2)
    return Completion(
        r_3P2=complex(h.real, -(r1f + r3f + r1p2).imag),
        r_2P2=complex(f.real, -complex(r2f).imag),
        r_3S2=complex(g.real, -complex(r1s2).imag),
    )


def derived_probabilities(data: TomographicData) -> DerivedProbabilities:
    """P(2), P(S2), P(D2), P(S1) on the canonical frame."""
    p1, pf = data.p1, data.pf
    a, b, c = data.r_1f.real, data.r_1D2.real, data.r_D2f.real
    return DerivedProbabilities(
        p2=0.5 * (1 - 2 * p1 + 3 * pf + 4 * b - 6 * c),
        pS2=0.25 * (1 + 6 * p1 - 3 * pf - 12 * b + 6 * c),
        pD2=0.25 * (1 - 2 * p1 - 3 * pf + 4 * b + 6 * c),
        pS1=1 - 1.5 * p1 - 1.5 * pf + 3 * a,
    )


def completion_shift(red: RedEntries) -> CoherenceShift:
    """Excess of rho(1,f) over the incoherent mixture with the same other red entries."""
    completed = np.array([v.real for v in complete_table(red)])
    delta = float(completed @ COHERENCE_DIRECTION / (COHERENCE_DIRECTION @ COHERENCE_DIRECTION))
    residual = float(np.max(np.abs(completed - delta * COHERENCE_DIRECTION)))
    return CoherenceShift(delta=delta, reference_r_1f=float(red.r_1f.real) - delta, residual=residual)
