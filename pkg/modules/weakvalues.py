"""
Contextual outcome values W(b|a) = rho(b,a) / P(a) and their fluctuations.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from modules import config
from modules.errors import ZeroProbabilityCondition
from modules.hilbert import DensityMatrix, born
from modules.kd import kd_term
from modules.pentagon import CONTEXTS, OUTCOMES, PentagonFrame, canonical_frame

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OutcomeRow:
    outcome: str
    probability: float
    # None when P(outcome) is too small for W to be defined
    values: Optional[Dict[str, complex]]

    @property
    def defined(self) -> bool:
        return self.values is not None


@dataclass(frozen=True)
class OutcomeValueTable:
    context: str
    rows: List[OutcomeRow]
    state_label: Optional[str] = None

    def row(self, outcome: str) -> OutcomeRow:
        for row in self.rows:
            if row.outcome == outcome:
                return row
        raise KeyError(outcome)

    def value(self, b: str, a: str) -> complex:
        row = self.row(a)
        if row.values is None:
            raise ZeroProbabilityCondition(a, row.probability)
        return row.values[b]

    def notation(self, b: str, a: str) -> str:
        state = f"|{self.state_label}" if self.state_label else ""
        return f"W({b}{state};{a})"


@dataclass(frozen=True)
class FluctuationReport:
    b: str
    context: str
    mean: float
    variance: float
    second_moment: float
    probability: float
    skipped: List[str] = field(default_factory=list)

    def bound_satisfied(self, tol: Optional[float] = None) -> bool:
        tol = config.TOLERANCE if tol is None else tol
        return self.second_moment <= self.probability + tol


def _frame(frame: Optional[PentagonFrame]) -> PentagonFrame:
    return canonical_frame() if frame is None else frame


def contextual_value(
    rho: DensityMatrix,
    b: str,
    a: str,
    frame: Optional[PentagonFrame] = None,
    tol: Optional[float] = None,
) -> complex:
    """W(b|a) = rho(b,a) / P(a)."""
    frame = _frame(frame)
    tol = config.ZERO_PROBABILITY if tol is None else tol
    p_a = born(rho, frame.vec(a))
    if p_a <= tol:
        raise ZeroProbabilityCondition(a, p_a)
    return kd_term(rho, b, a, frame) / p_a


def outcome_value_table(
    rho: DensityMatrix,
    context: str,
    frame: Optional[PentagonFrame] = None,
    state_label: Optional[str] = None,
    tol: Optional[float] = None,
) -> OutcomeValueTable:
    frame = _frame(frame)
    rows = []
    for a in CONTEXTS[context]:
        p_a = born(rho, frame.vec(a))
        try:
            values = {b: contextual_value(rho, b, a, frame, tol=tol) for b in OUTCOMES}
        except ZeroProbabilityCondition:
            logger.warning(f"W(b|{a}) undefined in context {context}: P({a}) = {p_a:.3e}")
            values = None
        rows.append(OutcomeRow(outcome=a, probability=p_a, values=values))
    return OutcomeValueTable(context=context, rows=rows, state_label=state_label)


def fluctuation(
    rho: DensityMatrix,
    b: str,
    context: str,
    frame: Optional[PentagonFrame] = None,
    skip_undefined: bool = False,
    tol: Optional[float] = None,
) -> FluctuationReport:
    """Spread of W(b|a) over the outcomes a of a context, weighted by P(a)."""
    frame = _frame(frame)
    table = outcome_value_table(rho, context, frame, tol=tol)
    p_b = born(rho, frame.vec(b))
    mean = variance = second = 0.0
    skipped = []
    for row in table.rows:
        if row.values is None:
            if not skip_undefined:
                raise ZeroProbabilityCondition(row.outcome, row.probability)
            skipped.append(row.outcome)
            continue
        w = row.values[b]
        mean += w.real * row.probability
        variance += abs(w - p_b) ** 2 * row.probability
        second += abs(w) ** 2 * row.probability
    return FluctuationReport(
        b=b,
        context=context,
        mean=mean,
        variance=variance,
        second_moment=second,
        probability=p_b,
        skipped=skipped,
    )


def context_summary(
    rho: DensityMatrix,
    b: str,
    context: str,
    frame: Optional[PentagonFrame] = None,
    digits: int = 10,
) -> List[Tuple[complex, float]]:
    """Distinct values of W(b|a) over the context with their total probability."""
    table = outcome_value_table(rho, context, frame)
    grouped: Dict[complex, float] = {}
    for row in table.rows:
        if row.values is None:
            continue
        w = row.values[b]
        key = complex(round(w.real, digits), round(w.imag, digits))
        grouped[key] = grouped.get(key, 0.0) + row.probability
    return sorted(grouped.items(), key=lambda item: -item[1])
