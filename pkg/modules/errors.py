"""Exceptions raised by the pentagon toolkit."""

from typing import List, Optional, Sequence

import numpy as np


class PentagonError(ValueError):
    """Base class for every diagnosis the toolkit reports."""


class DegenerateOverlap(PentagonError):
    """Lambda operator requested for (nearly) orthogonal states."""


class NotHermitian(PentagonError):
    def __init__(self, deviation: float):
        self.deviation = deviation
        super().__init__(f"matrix is not Hermitian (max |M - M^dagger| = {deviation:.3e})")


class TraceNotOne(PentagonError):
    def __init__(self, trace: complex):
        self.trace = trace
        super().__init__(f"trace is {trace.real:.12g}{trace.imag:+.3e}j, expected 1")


class NotPositive(PentagonError):
    """Non-positive state; keeps the raw matrix so callers can still report it."""

    def __init__(self, min_eigenvalue: float, matrix: Optional[np.ndarray] = None):
        self.min_eigenvalue = min_eigenvalue
        self.matrix = matrix
        super().__init__(f"non-positive state (most negative eigenvalue {min_eigenvalue:.6g})")


class DegenerateFrame(PentagonError):
    """The requested angles do not give five distinct contexts."""


class _ResidualError(PentagonError):
    def __init__(self, kind: str, failing: Sequence[int], residuals: Sequence[float]):
        self.failing: List[int] = list(failing)
        self.residuals: List[float] = [float(r) for r in residuals]
        lines = ", ".join(f"line {i + 1} ({self.residuals[i]:.3e})" for i in self.failing)
        super().__init__(f"{kind} violated: {lines}")


class IdentityViolation(_ResidualError):
    def __init__(self, failing: Sequence[int], residuals: Sequence[float]):
        super().__init__("Lambda identity", failing, residuals)


class ConstraintViolation(_ResidualError):
    def __init__(self, failing: Sequence[int], residuals: Sequence[float]):
        super().__init__("determinism constraint", failing, residuals)


class InconsistentMarginal(PentagonError):
    def __init__(self, name: str, residual: float):
        self.name = name
        self.residual = residual
        super().__init__(f"marginal {name} has imaginary part {residual:.3e}")


class ZeroProbabilityCondition(PentagonError):
    def __init__(self, outcome: str, probability: float):
        self.outcome = outcome
        self.probability = probability
        super().__init__(f"W(b|{outcome}) undefined: P({outcome}) = {probability:.3e}")


class StateSpecError(PentagonError):
    """Unparseable or invalid --state / --frame / input file."""
