"""
End-to-end simulated experiments: tomography from the five red entries and
the five-context inequality test.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from modules.contextuality import NONCONTEXTUAL_BOUND
from modules.errors import NotPositive
from modules.hilbert import DensityMatrix, eigenvalues, trace_distance
from modules.kd import kd_term
from modules.pentagon import PentagonFrame, canonical_frame
from modules.sim.rng import SeedStreams
from modules.sim.sampler import CountRecord, estimate_kd, sample_context
from modules.tomography import RedEntries, TomographicData, reconstruct, reconstruct_matrix, red_to_data

logger = logging.getLogger(__name__)

# Stream index of each red entry; the inequality contexts use their own indices
RED_SETTINGS = (
    ("r_1f", ("1", "f")),
    ("r_2f", ("2", "f")),
    ("r_3f", ("3", "f")),
    ("r_1S2", ("1", "S2")),
    ("r_1P2", ("1", "P2")),
)
INEQUALITY_SETTINGS = {"C123": 10, "C1": 11, "C2": 12, "Cf1": 13}


@dataclass
class EstimationReport:
    red: RedEntries
    red_stderr: Dict[str, complex]
    data: TomographicData
    reconstructed: np.ndarray
    positive: bool
    min_eigenvalue: float
    trace_distance: float
    shots_per_setting: int
    seed: Optional[int]
    settings: List[CountRecord] = field(default_factory=list)


@dataclass
class InequalityReport:
    sigma_hat: float
    stderr: float
    probabilities: Dict[str, float]
    stderrs: Dict[str, float]
    shots_per_context: int
    seed: int
    settings: List[CountRecord] = field(default_factory=list)

    @property
    def z_score(self) -> float:
        """Standard errors above the non-contextual bound."""
        if self.stderr == 0:
            return math.inf if self.sigma_hat > NONCONTEXTUAL_BOUND else 0.0
        return (self.sigma_hat - NONCONTEXTUAL_BOUND) / self.stderr


def run_tomography_experiment(
    rho: DensityMatrix,
    shots_per_setting: int,
    seed: Optional[int],
    frame: Optional[PentagonFrame] = None,
    exact: bool = False,
) -> EstimationReport:
    """Estimate the red entries, reconstruct, and compare with the true state.

    exact=True injects the exact KD terms instead of sampling (noiseless limit).
    """
    frame = canonical_frame() if frame is None else frame
    streams = None if exact else SeedStreams(seed)
    values, stderr, records = {}, {}, []
    for setting, (name, (a, b)) in enumerate(RED_SETTINGS):
        if exact:
            values[name] = kd_term(rho, a, b, frame)
            stderr[name] = 0j
            continue
        estimate = estimate_kd(rho, a, b, shots_per_setting, streams, frame, setting=setting)
        values[name] = estimate.value
        stderr[name] = complex(estimate.stderr_re, estimate.stderr_im)
        records.extend(estimate.records)

    red = RedEntries(**values)
    data = red_to_data(red, strict=False)
    try:
        matrix = reconstruct(data, frame)
        positive = True
    except NotPositive as e:
        logger.warning(f"Reconstruction is not a valid state: {e}")
        matrix = e.matrix if e.matrix is not None else reconstruct_matrix(data, frame)
        positive = False

    distance = trace_distance(matrix, rho)
    logger.info(
        f"Tomography with {shots_per_setting} shots/setting: trace distance {distance:.3e}, positive={positive}"
    )
    return EstimationReport(
        red=red,
        red_stderr=stderr,
        data=data,
        reconstructed=np.array(matrix),
        positive=positive,
        min_eigenvalue=float(eigenvalues(matrix)[0]),
        trace_distance=distance,
        shots_per_setting=shots_per_setting,
        seed=seed,
        settings=records,
    )


def run_inequality_experiment(
    rho: DensityMatrix,
    shots_per_context: int,
    seed: int,
    frame: Optional[PentagonFrame] = None,
) -> InequalityReport:
    """Estimate each shared-outcome probability in one of its own contexts and sum."""
    frame = canonical_frame() if frame is None else frame
    streams = SeedStreams(seed)
    records = {
        context: sample_context(rho, context, shots_per_context, streams, frame, setting=index)
        for context, index in INEQUALITY_SETTINGS.items()
    }
    n = shots_per_context
    p = {
        "1": records["C123"].frequency("1"),
        "2": records["C123"].frequency("2"),
        "S1": records["C1"].frequency("S1"),
        "S2": records["C2"].frequency("S2"),
        "f": records["Cf1"].frequency("f"),
    }
    stderrs = {outcome: math.sqrt(value * (1 - value) / n) for outcome, value in p.items()}
    # 1 and 2 share a multinomial draw
    joint = p["1"] + p["2"]
    variance = joint * (1 - joint) / n + sum(stderrs[o] ** 2 for o in ("S1", "S2", "f"))
    sigma_hat = sum(p.values())
    logger.info(f"Inequality with {n} shots/context: sigma={sigma_hat:.6f} +/- {math.sqrt(variance):.2e}")
    return InequalityReport(
        sigma_hat=sigma_hat,
        stderr=math.sqrt(variance),
        probabilities=p,
        stderrs=stderrs,
        shots_per_context=n,
        seed=seed,
        settings=list(records.values()),
    )


def counts_to_frame(records: Iterable[CountRecord]) -> pd.DataFrame:
    """Long-format counts table with columns basis, outcome, count."""
    rows = [
        {"basis": record.basis, "outcome": outcome, "count": count}
        for record in records
        for outcome, count in zip(record.outcomes, record.counts)
    ]
    return pd.DataFrame(rows, columns=["basis", "outcome", "count"])
