"""
Named states and resolution of --state / --frame arguments.

State specs:
    named:<name>      one of the ten outcomes, T1f, Nx or mixed
    pure:<a1>,<a2>,<a3>   amplitudes as Python complex literals, e.g. pure:1,1j,0
    file:<path>       JSON with "kind" = "pure" | "density" | "named"
"""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from modules.errors import PentagonError, StateSpecError
from modules.hilbert import DensityMatrix, ket, maximally_mixed, pure_density, validate_density
from modules.pentagon import OUTCOMES, PentagonFrame, canonical_frame, frame_from_angles

logger = logging.getLogger(__name__)

# Reference-basis amplitudes of the worked-example states
EXAMPLE_AMPLITUDES: Dict[str, tuple] = {
    "T1f": (3, 1, -1),
    "Nx": (2, 2, 1),
}
NAMED_STATES: List[str] = list(OUTCOMES) + ["T1f", "Nx", "mixed"]


@dataclass(frozen=True)
class ResolvedState:
    label: str
    rho: DensityMatrix
    pure: bool


@dataclass(frozen=True)
class FrameSpec:
    kind: str = "canonical"
    theta1: Optional[float] = None
    theta2: Optional[float] = None

    def resolve(self) -> PentagonFrame:
        if self.kind == "canonical":
            return canonical_frame()
        if self.kind == "angles":
            if self.theta1 is None or self.theta2 is None:
                raise StateSpecError("--frame angles requires --theta1 and --theta2")
            return frame_from_angles(self.theta1, self.theta2)
        raise StateSpecError(f"unknown frame kind {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "angles":
            return f"angles({self.theta1:.6g},{self.theta2:.6g})"
        return self.kind


def named_state(name: str, frame: Optional[PentagonFrame] = None) -> ResolvedState:
    frame = canonical_frame() if frame is None else frame
    if name == "mixed":
        return ResolvedState(name, maximally_mixed(), pure=False)
    if name in EXAMPLE_AMPLITUDES:
        return ResolvedState(name, pure_density(ket(*EXAMPLE_AMPLITUDES[name])), pure=True)
    if name in OUTCOMES:
        return ResolvedState(name, pure_density(frame.vec(name)), pure=True)
    raise StateSpecError(f"unknown named state {name!r}; choose from {', '.join(NAMED_STATES)}")


def _complex_pair(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            pass
    raise StateSpecError(f"{where}: expected a number or a [re, im] pair, got {value!r}")


def _validated(label: str, matrix: np.ndarray, pure: bool) -> ResolvedState:
    try:
        rho = validate_density(matrix)
    except PentagonError as e:
        raise StateSpecError(f"state {label!r} is not a valid density matrix: {e}")
    except ValueError as e:
        raise StateSpecError(f"state {label!r}: {e}")
    return ResolvedState(label, rho, pure=pure)


def _pure(label: str, amplitudes: List[complex]) -> ResolvedState:
    if len(amplitudes) != 3:
        raise StateSpecError(f"state {label!r}: expected 3 amplitudes, got {len(amplitudes)}")
    if not all(math.isfinite(a.real) and math.isfinite(a.imag) for a in amplitudes):
        raise StateSpecError(f"state {label!r}: amplitudes must be finite")
    try:
        vec = ket(*amplitudes)
    except ValueError as e:
        raise StateSpecError(f"state {label!r}: {e}")
    return ResolvedState(label, pure_density(vec), pure=True)


def state_from_json(document: Dict[str, Any], label: str, frame: Optional[PentagonFrame] = None) -> ResolvedState:
    kind = document.get("kind")
    if kind == "named":
        return named_state(str(document.get("name")), frame)
    if kind == "pure":
        amplitudes = document.get("amplitudes")
        if not isinstance(amplitudes, list):
            raise StateSpecError(f"{label}: 'amplitudes' must be a list")
        return _pure(label, [_complex_pair(a, f"{label} amplitude {i}") for i, a in enumerate(amplitudes)])
    if kind == "density":
        matrix = document.get("matrix")
        if not isinstance(matrix, list) or len(matrix) != 3 or any(
            not isinstance(row, list) or len(row) != 3 for row in matrix
        ):
            raise StateSpecError(f"{label}: 'matrix' must be 3x3")
        m = np.array(
            [[_complex_pair(x, f"{label} entry ({i},{j})") for j, x in enumerate(row)] for i, row in enumerate(matrix)]
        )
        return _validated(label, m, pure=False)
    raise StateSpecError(f"{label}: 'kind' must be one of pure, density, named (got {kind!r})")


def resolve_state(spec: str, frame: Optional[PentagonFrame] = None) -> ResolvedState:
    """Turn a --state argument into a validated density matrix."""
    kind, sep, body = spec.partition(":")
    if not sep:
        raise StateSpecError(f"state spec {spec!r} must look like named:X, pure:a,b,c or file:path")
    if kind == "named":
        return named_state(body, frame)
    if kind == "pure":
        try:
            amplitudes = [complex(part.strip().replace(" ", "")) for part in body.split(",")]
        except ValueError:
            raise StateSpecError(f"cannot parse amplitudes {body!r}")
        return _pure(spec, amplitudes)
    if kind == "file":
        path = Path(body)
        try:
            document = json.loads(path.read_text())
        except OSError as e:
            raise StateSpecError(f"cannot read state file {body}: {e}")
        except json.JSONDecodeError as e:
            raise StateSpecError(f"state file {body} is not valid JSON: {e}")
        if not isinstance(document, dict):
            raise StateSpecError(f"state file {body} must hold a JSON object")
        logger.info(f"Loaded state from {body}")
        return state_from_json(document, path.stem, frame)
    raise StateSpecError(f"unknown state kind {kind!r}")


def resolve_frame(kind: str, theta1: Optional[float] = None, theta2: Optional[float] = None) -> PentagonFrame:
    return FrameSpec(kind, theta1, theta2).resolve()
