"""
Kirkwood-Dirac terms rho(a,b) = <b|a><a|rho|b> over the pentagon frame.

The eleven-path distribution stores one term per classical path; terms in
the opposite order are recovered from Hermitian pairing,
rho(b,a) = conj(rho(a,b)).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from modules import config
from modules.errors import ConstraintViolation, IdentityViolation
from modules.hilbert import DensityMatrix, born, inner, lambda_op
from modules.pentagon import (
    CONTEXT_ORDER,
    CONTEXTS,
    OUTCOMES,
    PATH_KEYS,
    PATHS,
    PentagonFrame,
    canonical_frame,
)

logger = logging.getLogger(__name__)

# Each line is three Lambda(a,b) pairs whose operators sum to the identity
LAMBDA_LINES: Tuple[Tuple[Tuple[str, str], ...], ...] = (
    (("1", "S2"), ("f", "2"), ("D2", "S1")),
    (("S1", "2"), ("S2", "1"), ("3", "f")),
    (("f", "1"), ("2", "S1"), ("D1", "S2")),
    (("S2", "S1"), ("1", "f"), ("P1", "2")),
    (("2", "f"), ("S1", "S2"), ("P2", "1")),
)

TABLE_ROWS: Tuple[str, str, str] = ("f", "S2", "P2")
TABLE_COLUMNS: Tuple[str, str, str] = ("1", "2", "3")
FORBIDDEN_ENTRY: Tuple[str, str] = ("S2", "2")


def _frame(frame: Optional[PentagonFrame]) -> PentagonFrame:
    return canonical_frame() if frame is None else frame


def kd_term(rho: DensityMatrix, a: str, b: str, frame: Optional[PentagonFrame] = None) -> complex:
    """rho(a,b) = <b|a><a|rho|b>, zero for orthogonal a and b."""
    frame = _frame(frame)
    va, vb = frame.vec(a), frame.vec(b)
    return inner(vb, va) * complex(np.vdot(va, rho @ vb))


def rho_zero(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> complex:
    """Weight of the path through the five unique outcomes: rho(D1,D2) - rho(3,f)."""
    return kd_term(rho, "D1", "D2", frame) - kd_term(rho, "3", "f", frame)


@dataclass(frozen=True)
class KDDistribution11:
    """Eleven quasi-probabilities keyed by path key ("0", "1,P2", ...)."""

    terms: Dict[str, complex]

    def __getitem__(self, key: str) -> complex:
        return self.terms[key]

    def total(self) -> complex:
        return sum(self.terms.values())

    def values(self) -> np.ndarray:
        return np.array([self.terms[k] for k in PATH_KEYS], dtype=np.complex128)

    def normalization_residual(self) -> complex:
        """rho(0) minus (1 - sum of the ten pair terms)."""
        pairs = sum(self.terms[k] for k in PATH_KEYS if k != "0")
        return self.terms["0"] - (1.0 - pairs)

    def pair(self, a: str, b: str) -> complex:
        """rho(a,b) for any ordered pair stored (directly or conjugated) in the distribution."""
        for path in PATHS:
            if path.term == (a, b):
                return self.terms[path.key]
            if path.term == (b, a):
                return complex(np.conj(self.terms[path.key]))
        raise KeyError(f"rho({a},{b}) is not one of the eleven path terms")


def eleven_terms(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> KDDistribution11:
    frame = _frame(frame)
    terms = {}
    for path in PATHS:
        if path.term is None:
            terms[path.key] = rho_zero(rho, frame)
        else:
            terms[path.key] = kd_term(rho, path.term[0], path.term[1], frame)
    return KDDistribution11(terms)


def born_probabilities(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> Dict[str, float]:
    frame = _frame(frame)
    return {outcome: born(rho, frame.vec(outcome)) for outcome in OUTCOMES}


def marginals(terms: KDDistribution11) -> Dict[str, Dict[str, complex]]:
    """Per context, the sum of the path terms passing through each outcome."""
    result: Dict[str, Dict[str, complex]] = {}
    for index, context in enumerate(CONTEXT_ORDER):
        sums = {outcome: 0j for outcome in CONTEXTS[context]}
        for path in PATHS:
            sums[path.assignment[index]] += terms[path.key]
        result[context] = sums
    return result


def marginal_residual(
    terms: KDDistribution11, rho: DensityMatrix, frame: Optional[PentagonFrame] = None
) -> float:
    """Largest |Re(marginal) - P(a)| over all contexts and outcomes."""
    probabilities = born_probabilities(rho, frame)
    worst = 0.0
    for sums in marginals(terms).values():
        for outcome, value in sums.items():
            worst = max(worst, abs(value.real - probabilities[outcome]))
    return worst


@dataclass
class ResidualReport:
    residuals: List[float]
    sums: List[complex] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    def failing(self, tol: float) -> List[int]:
        return [i for i, r in enumerate(self.residuals) if r > tol]


def verify_identities(frame: Optional[PentagonFrame] = None, tol: Optional[float] = None) -> ResidualReport:
    """Max-norm residual of each Lambda line against the identity."""
    frame = _frame(frame)
    tol = config.TOLERANCE if tol is None else tol
    residuals = []
    for line in LAMBDA_LINES:
        total = sum(lambda_op(frame.vec(a), frame.vec(b)) for a, b in line)
        residuals.append(float(np.max(np.abs(total - np.eye(3)))))
    report = ResidualReport(residuals)
    failing = report.failing(tol)
    if failing:
        raise IdentityViolation(failing, residuals)
    logger.debug(f"Lambda identities hold, worst residual {report.max_residual:.3e}")
    return report


def determinism_weights(frame: Optional[PentagonFrame] = None) -> List[List[float]]:
    """1/|<a|b>|^2 for every pair of every line."""
    frame = _frame(frame)
    return [[1.0 / abs(frame.overlap(a, b)) ** 2 for a, b in line] for line in LAMBDA_LINES]


def check_determinism(
    terms: KDDistribution11, frame: Optional[PentagonFrame] = None, tol: Optional[float] = None
) -> ResidualReport:
    """Weighted sums sum_{(a,b) in line} rho(a,b)/|<a|b>|^2, each expected to be 1."""
    tol = config.TOLERANCE if tol is None else tol
    sums = []
    for line, weights in zip(LAMBDA_LINES, determinism_weights(frame)):
        sums.append(sum(w * terms.pair(a, b) for (a, b), w in zip(line, weights)))
    report = ResidualReport([abs(s - 1.0) for s in sums], sums)
    failing = report.failing(tol)
    if failing:
        raise ConstraintViolation(failing, report.residuals)
    return report


def kd_distribution_pair(
    rho: DensityMatrix,
    context_a: str,
    context_b: str,
    frame: Optional[PentagonFrame] = None,
) -> np.ndarray:
    """3x3 matrix M[i, j] = rho(a_i, b_j) for a_i in context_a and b_j in context_b."""
    frame = _frame(frame)
    rows, cols = CONTEXTS[context_a], CONTEXTS[context_b]
    return np.array([[kd_term(rho, a, b, frame) for b in cols] for a in rows], dtype=np.complex128)


@dataclass(frozen=True)
class KDTable:
    """Two-context table with rows (f, S2, P2) and columns (1, 2, 3).

    Entry (row b, column a) holds rho(a, b).
    """

    values: np.ndarray
    rows: Tuple[str, str, str] = TABLE_ROWS
    columns: Tuple[str, str, str] = TABLE_COLUMNS
    forbidden: Tuple[Tuple[str, str], ...] = (FORBIDDEN_ENTRY,)

    def entry(self, row: str, column: str) -> complex:
        return complex(self.values[self.rows.index(row), self.columns.index(column)])

    def is_forbidden(self, row: str, column: str) -> bool:
        return (row, column) in self.forbidden

    def row_sums(self) -> Dict[str, complex]:
        return {r: complex(s) for r, s in zip(self.rows, self.values.sum(axis=1))}

    def column_sums(self) -> Dict[str, complex]:
        return {c: complex(s) for c, s in zip(self.columns, self.values.sum(axis=0))}

    def total(self) -> complex:
        return complex(self.values.sum())


def kd_table(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> KDTable:
    frame = _frame(frame)
    values = np.zeros((3, 3), dtype=np.complex128)
    for i, row in enumerate(TABLE_ROWS):
        for j, column in enumerate(TABLE_COLUMNS):
            if (row, column) == FORBIDDEN_ENTRY:
                continue
            values[i, j] = kd_term(rho, column, row, frame)
    return KDTable(values)


def pair_sum_relations(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> Tuple[float, float, float]:
    """Residuals of the three completed table entries written as sums of path terms."""
    frame = _frame(frame)
    terms = eleven_terms(rho, frame)
    first = kd_term(rho, "3", "S2", frame) - (terms["S1,S2"] + terms["S2,D1"])
    second = kd_term(rho, "2", "P2", frame) - (terms["2,S1"] + terms["2,P1"])
    third = kd_term(rho, "3", "P2", frame) - (terms["S1,D2"] + terms["0"])
    return abs(first), abs(second), abs(third)


def p3_relations(rho: DensityMatrix, frame: Optional[PentagonFrame] = None) -> Tuple[float, float]:
    """Two ways of writing P(3): paths through 3, and the four (S1|D1, S2|D2) terms."""
    frame = _frame(frame)
    terms = eleven_terms(rho, frame)
    p3 = born(rho, frame.vec("3"))
    through_three = sum(terms[p.key] for p in PATHS if p.assignment[0] == "3")
    crossed = sum(
        kd_term(rho, x, y, frame) for x in ("S1", "D1") for y in ("S2", "D2")
    )
    return abs(through_three - p3), abs(crossed - p3)


def bargmann_invariant(frame: Optional[PentagonFrame] = None) -> complex:
    """<3|D1><D1|P1><P1|P2><P2|D2><D2|3>"""
    frame = _frame(frame)
    chain = ("3", "D1", "P1", "P2", "D2", "3")
    product = 1.0 + 0j
    for a, b in zip(chain, chain[1:]):
        product *= frame.overlap(a, b)
    return product


def negative_terms(terms: KDDistribution11, tol: Optional[float] = None) -> List[str]:
    """Path keys whose term has a real part below -tol."""
    tol = config.TOLERANCE if tol is None else tol
    return [k for k in PATH_KEYS if terms[k].real < -tol]

