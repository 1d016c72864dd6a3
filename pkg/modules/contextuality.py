"""
Non-contextual bound P(1) + P(2) + P(S1) + P(S2) + P(f) <= 2.

The sum is available three ways: from Born probabilities, from the five
tomographic coefficients, and from the eleven path terms.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from modules import config
from modules.hilbert import DensityMatrix, StateVector, born, eigenvalues, ket
from modules.kd import KDDistribution11, eleven_terms
from modules.pentagon import SHARED_OUTCOMES, PentagonFrame, canonical_frame
from modules.tomography import RedEntries, TomographicData, extract

logger = logging.getLogger(__name__)

NONCONTEXTUAL_BOUND = 2.0

# Paths subtracted from the bound, with their multiplicity
SIGMA_DEFICIT: Dict[str, float] = {
    "S1,D2": 1.0,
    "S2,D1": 1.0,
    "2,P1": 1.0,
    "1,P2": 1.0,
    "f,3": 1.0,
    "0": 2.0,
}


@dataclass(frozen=True)
class SigmaReport:
    sigma: float
    probabilities: Dict[str, float]
    violated: bool
    margin: float


@dataclass(frozen=True)
class MaximizationResult:
    sigma: float
    state: StateVector
    eigen_bound: float
    restarts: int


def _frame(frame: Optional[PentagonFrame]) -> PentagonFrame:
    return canonical_frame() if frame is None else frame


def _violated(sigma: float, tol: Optional[float]) -> bool:
    tol = config.TOLERANCE if tol is None else tol
    return sigma - NONCONTEXTUAL_BOUND > tol


def probability_sum(
    rho: DensityMatrix, frame: Optional[PentagonFrame] = None, tol: Optional[float] = None
) -> SigmaReport:
    frame = _frame(frame)
    probabilities = {outcome: born(rho, frame.vec(outcome)) for outcome in SHARED_OUTCOMES}
    sigma = sum(probabilities.values())
    return SigmaReport(
        sigma=sigma,
        probabilities=probabilities,
        violated=_violated(sigma, tol),
        margin=sigma - NONCONTEXTUAL_BOUND,
    )


def sigma_from_data(data: TomographicData) -> float:
    """Sigma from the tomographic coefficients (canonical frame)."""
    coherent = 3 * data.r_1f - data.r_1D2 - 1.5 * data.r_D2f
    return 1.75 + 0.25 * data.pf + coherent.real


def violation_criterion(red: RedEntries, tol: Optional[float] = None) -> Tuple[float, bool]:
    """3 rho(1,f) + rho(2,f) - 5 rho(3,f) - 4 rho(1,P2), violated when above 1."""
    tol = config.TOLERANCE if tol is None else tol
    lhs = 3 * red.r_1f.real + red.r_2f.real - 5 * red.r_3f.real - 4 * red.r_1P2.real
    return lhs, lhs > 1.0 + tol


def sigma_from_kd(terms: KDDistribution11) -> float:
    deficit = sum(weight * terms[key] for key, weight in SIGMA_DEFICIT.items())
    return float((NONCONTEXTUAL_BOUND - deficit).real)


def sigma_operator(frame: Optional[PentagonFrame] = None) -> np.ndarray:
    frame = _frame(frame)
    return sum(frame.projector(outcome) for outcome in SHARED_OUTCOMES)


def single_zero_state(
    outcome: str, rng: np.random.Generator, frame: Optional[PentagonFrame] = None
) -> StateVector:
    """Random pure state orthogonal to |outcome>."""
    frame = _frame(frame)
    v = frame.vec(outcome)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    z = z - v * np.vdot(v, z)
    return ket(*z)


def maximize_sigma(
    frame: Optional[PentagonFrame] = None, restarts: int = 20, seed: int = 0
) -> MaximizationResult:
    """Largest Sigma over pure states by multi-start local ascent."""
    frame = _frame(frame)
    op = sigma_operator(frame)
    rng = np.random.default_rng(seed)

    def objective(x: np.ndarray) -> float:
        z = x[:3] + 1j * x[3:]
        norm = float(np.real(np.vdot(z, z)))
        return -float(np.real(np.vdot(z, op @ z))) / norm

    best_value, best_state = -math.inf, None
    for attempt in range(restarts):
        result = minimize(objective, rng.normal(size=6), method="BFGS")
        value = -result.fun
        logger.debug(f"Restart {attempt}: sigma={value:.10f}")
        if value > best_value:
            best_value, best_state = value, result.x
    state = ket(*(best_state[:3] + 1j * best_state[3:]))
    bound = float(eigenvalues(op)[-1])
    if best_value > bound + 1e-8:
        logger.warning(f"Maximizer exceeded the eigenvalue bound ({best_value:.10f} > {bound:.10f})")
    logger.info(f"Sigma maximum {best_value:.10f} over {restarts} restarts (eigenvalue bound {bound:.10f})")
    return MaximizationResult(sigma=float(best_value), state=state, eigen_bound=bound, restarts=restarts)


def all_sigmas(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> List[float]:
    """Born, tomographic and path-term values of Sigma for one state."""
    frame = _frame(frame)
    return [
        probability_sum(rho, frame).sigma,
        sigma_from_data(extract(rho, frame)),
        sigma_from_kd(eleven_terms(rho, frame)),
    ]
