"""
Finite-shot projective measurements and KD-term estimation.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from modules import config
from modules.errors import NotHermitian
from modules.hilbert import DensityMatrix, OperatorMatrix, hermiticity_deviation
from modules.pentagon import CONTEXTS, PentagonFrame, canonical_frame
from modules.sim.rng import as_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CountRecord:
    basis: str
    outcomes: Tuple[str, ...]
    counts: Tuple[int, ...]
    shots: int

    def frequency(self, outcome: str) -> float:
        return self.counts[self.outcomes.index(outcome)] / self.shots

    def as_dict(self):
        return dict(zip(self.outcomes, self.counts))


@dataclass(frozen=True)
class ObservableRecord:
    record: CountRecord
    eigenvalues: Tuple[float, ...]
    mean: float
    stderr: float


@dataclass(frozen=True)
class KDEstimate:
    value: complex
    stderr_re: float
    stderr_im: float
    shots_re: int
    shots_im: int
    records: Tuple[CountRecord, ...] = ()


def _check_shots(shots: int) -> int:
    if isinstance(shots, bool) or int(shots) != shots or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    return int(shots)


def _draw(probabilities: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    # Born probabilities of a valid state can dip below zero by roundoff only
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    total = p.sum()
    if total <= 0:
        raise ValueError("probabilities sum to zero")
    return rng.multinomial(shots, p / total)


def sample_context(
    rho: DensityMatrix,
    context: str,
    shots: int,
    seed,
    frame: Optional[PentagonFrame] = None,
    setting: int = 0,
) -> CountRecord:
    """Multinomial draw over the three outcomes of a context."""
    frame = canonical_frame() if frame is None else frame
    shots = _check_shots(shots)
    outcomes = CONTEXTS[context]
    probabilities = [np.real(np.vdot(frame.vec(a), rho @ frame.vec(a))) for a in outcomes]
    counts = _draw(np.array(probabilities), shots, as_generator(seed, setting))
    logger.debug(f"Sampled {context} with {shots} shots: {counts.tolist()}")
    return CountRecord(context, tuple(outcomes), tuple(int(c) for c in counts), shots)


def eigenbins(h: OperatorMatrix, gap: Optional[float] = None):
    """Eigenvalues of h merged within gap, with the projector onto each bin."""
    gap = config.DEGENERACY_GAP if gap is None else gap
    values, vectors = np.linalg.eigh(h)
    bins = []
    for value, vector in zip(values, vectors.T):
        outer = np.outer(vector, np.conj(vector))
        if bins and abs(value - bins[-1][0]) <= gap:
            last_value, projector, size = bins[-1]
            bins[-1] = (last_value, projector + outer, size + 1)
        else:
            bins.append((float(value), outer, 1))
    return [(value, projector) for value, projector, _ in bins]


def sample_observable(
    rho: DensityMatrix,
    h: OperatorMatrix,
    shots: int,
    seed,
    label: str = "H",
    setting: int = 0,
    part: int = 0,
    tol: Optional[float] = None,
) -> ObservableRecord:
    """Measure a Hermitian observable in its eigenbasis and average the eigenvalues."""
    tol = config.TOLERANCE if tol is None else tol
    h = np.asarray(h, dtype=np.complex128)
    deviation = hermiticity_deviation(h)
    if deviation > tol:
        raise NotHermitian(deviation)
    shots = _check_shots(shots)
    bins = eigenbins((h + np.conj(h).T) / 2)
    values = np.array([value for value, _ in bins])
    probabilities = np.array([np.real(np.trace(rho @ projector)) for _, projector in bins])
    counts = _draw(probabilities, shots, as_generator(seed, setting, part))

    mean = float(counts @ values / shots)
    spread = float(counts @ (values - mean) ** 2 / shots)
    record = CountRecord(
        label,
        tuple(f"{value:.12g}" for value in values),
        tuple(int(c) for c in counts),
        shots,
    )
    return ObservableRecord(record, tuple(float(v) for v in values), mean, math.sqrt(spread / shots))


def kd_observables(a_vec: np.ndarray, b_vec: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Hermitian and anti-Hermitian parts of K = <b|a>|b><a|, so Tr(rho K) = rho(a,b)."""
    k = np.vdot(b_vec, a_vec) * np.outer(b_vec, np.conj(a_vec))
    k_dag = np.conj(k).T
    return (k + k_dag) / 2, (k - k_dag) / 2j


def estimate_kd(
    rho: DensityMatrix,
    a: str,
    b: str,
    shots: int,
    seed,
    frame: Optional[PentagonFrame] = None,
    setting: int = 0,
    tol: Optional[float] = None,
) -> KDEstimate:
    """Unbiased finite-shot estimate of rho(a,b); ceil(shots/2) shots go to the real part."""
    frame = canonical_frame() if frame is None else frame
    tol = config.TOLERANCE if tol is None else tol
    shots = _check_shots(shots)
    va, vb = frame.vec(a), frame.vec(b)
    if abs(np.vdot(va, vb)) <= tol:
        return KDEstimate(0j, 0.0, 0.0, 0, 0)

    h, anti = kd_observables(va, vb)
    shots_re = (shots + 1) // 2
    shots_im = shots // 2
    real_part = sample_observable(rho, h, shots_re, seed, label=f"Re K({a},{b})", setting=setting, part=0)
    records = [real_part.record]
    if shots_im:
        imag_part = sample_observable(
            rho, anti, shots_im, seed, label=f"Im K({a},{b})", setting=setting, part=1
        )
        records.append(imag_part.record)
        imag, stderr_im = imag_part.mean, imag_part.stderr
    else:
        imag, stderr_im = 0.0, math.nan
    return KDEstimate(
        value=complex(real_part.mean, imag),
        stderr_re=real_part.stderr,
        stderr_im=stderr_im,
        shots_re=shots_re,
        shots_im=shots_im,
        records=tuple(records),
    )
