"""
The five measurement contexts of a qutrit and the eleven classical paths
through them.

Contexts are kept in ring order C123 -1- C1 -S1- Cf1 -f- Cf2 -S2- C2 -2- C123,
which is also the column order of every path assignment.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from modules import config
from modules.errors import DegenerateFrame
from modules.hilbert import StateVector, basis, inner, ket, projector

logger = logging.getLogger(__name__)

OUTCOMES: Tuple[str, ...] = ("1", "2", "3", "S1", "S2", "D1", "D2", "f", "P1", "P2")
SHARED_OUTCOMES: Tuple[str, ...] = ("1", "2", "S1", "S2", "f")
UNIQUE_OUTCOMES: Tuple[str, ...] = ("3", "D1", "P1", "P2", "D2")

CONTEXT_ORDER: Tuple[str, ...] = ("C123", "C1", "Cf1", "Cf2", "C2")
CONTEXTS: Dict[str, Tuple[str, str, str]] = {
    "C123": ("1", "2", "3"),
    "C1": ("1", "S1", "D1"),
    "Cf1": ("S1", "f", "P1"),
    "Cf2": ("S2", "f", "P2"),
    "C2": ("2", "S2", "D2"),
}


@dataclass(frozen=True)
class Path:
    """One of the eleven non-contextual paths.

    ``segments`` is the printed label pair, ``term`` the argument order of
    the KD term stored for the path (differs from ``segments`` for [f,3]
    and [S2,D1]), ``assignment`` the outcome in each context of CONTEXT_ORDER.
    """

    key: str
    segments: Optional[Tuple[str, str]]
    term: Optional[Tuple[str, str]]
    assignment: Tuple[str, str, str, str, str]

    @property
    def label(self) -> str:
        return f"[{self.key}]"

    @property
    def shared_count(self) -> int:
        return len(set(self.assignment) & set(SHARED_OUTCOMES))

    def outcome_in(self, context: str) -> str:
        return self.assignment[CONTEXT_ORDER.index(context)]


PATHS: Tuple[Path, ...] = (
    Path("0", None, None, ("3", "D1", "P1", "P2", "D2")),
    Path("1,P2", ("1", "P2"), ("1", "P2"), ("1", "1", "P1", "P2", "D2")),
    Path("S1,D2", ("S1", "D2"), ("S1", "D2"), ("3", "S1", "S1", "P2", "D2")),
    Path("f,3", ("f", "3"), ("3", "f"), ("3", "D1", "f", "f", "D2")),
    Path("S2,D1", ("S2", "D1"), ("D1", "S2"), ("3", "D1", "P1", "S2", "S2")),
    Path("2,P1", ("2", "P1"), ("2", "P1"), ("2", "D1", "P1", "P2", "2")),
    Path("1,f", ("1", "f"), ("1", "f"), ("1", "1", "f", "f", "D2")),
    Path("S1,S2", ("S1", "S2"), ("S1", "S2"), ("3", "S1", "S1", "S2", "S2")),
    Path("2,f", ("2", "f"), ("2", "f"), ("2", "D1", "f", "f", "2")),
    Path("1,S2", ("1", "S2"), ("1", "S2"), ("1", "1", "P1", "S2", "S2")),
    Path("2,S1", ("2", "S1"), ("2", "S1"), ("2", "S1", "S1", "P2", "2")),
)
PATH_KEYS: Tuple[str, ...] = tuple(p.key for p in PATHS)


@dataclass(frozen=True)
class PentagonFrame:
    vectors: Dict[str, StateVector]

    def vec(self, outcome: str) -> StateVector:
        return self.vectors[outcome]

    def overlap(self, a: str, b: str) -> complex:
        """<a|b>"""
        return inner(self.vectors[a], self.vectors[b])

    def projector(self, outcome: str) -> np.ndarray:
        return projector(self.vectors[outcome])

    @property
    def contexts(self) -> Dict[str, Tuple[str, str, str]]:
        return CONTEXTS

    def gram(self, context: str) -> np.ndarray:
        members = CONTEXTS[context]
        return np.array([[self.overlap(a, b) for b in members] for a in members])


@dataclass(frozen=True)
class Reflectivities:
    R1: float
    R2: float
    RS1: float
    RS2: float
    Rf: float

    def as_dict(self) -> Dict[str, float]:
        return {"R1": self.R1, "R2": self.R2, "RS1": self.RS1, "RS2": self.RS2, "Rf": self.Rf}


def _complement(u: StateVector, v: StateVector, what: str, tol: float) -> StateVector:
    """Unit vector orthogonal to u and v: conjugated cross product."""
    w = np.conj(np.cross(u, v))
    if np.linalg.norm(w) < tol:
        raise DegenerateFrame(f"{what} is not unique (constraint vectors are parallel)")
    return ket(*w)


def validate_frame(frame: PentagonFrame, tol: Optional[float] = None) -> PentagonFrame:
    """Check that every context is an orthonormal basis."""
    tol = config.TOLERANCE if tol is None else tol
    for name in CONTEXT_ORDER:
        deviation = float(np.max(np.abs(frame.gram(name) - np.eye(3))))
        if deviation > tol:
            raise DegenerateFrame(f"context {name} is not orthonormal (deviation {deviation:.3e})")
    return frame


def frame_from_angles(theta1: float, theta2: float, tol: Optional[float] = None) -> PentagonFrame:
    """Frame with |S1> = cos t1|2> + sin t1|3> and |S2> = cos t2|1> + sin t2|3>.

    Remaining vectors are per-context complements; frame_from_angles(pi/4, pi/4)
    reproduces canonical_frame().
    """
    tol = config.TOLERANCE if tol is None else tol
    for name, theta in (("theta1", theta1), ("theta2", theta2)):
        if not math.isfinite(theta):
            raise DegenerateFrame(f"{name} must be finite")
        if abs(math.sin(theta)) <= tol or abs(math.cos(theta)) <= tol:
            raise DegenerateFrame(f"{name}={theta!r}: sin and cos must both be non-zero")

    e1, e2, e3 = basis(1), basis(2), basis(3)
    s1 = ket(0.0, math.cos(theta1), math.sin(theta1))
    s2 = ket(math.cos(theta2), 0.0, math.sin(theta2))
    f = _complement(s1, s2, "|f>", tol)
    vectors = {
        "1": e1,
        "2": e2,
        "3": e3,
        "S1": s1,
        "S2": s2,
        "f": f,
        "D1": _complement(s1, e1, "|D1>", tol),
        "D2": _complement(e2, s2, "|D2>", tol),
        "P1": _complement(f, s1, "|P1>", tol),
        "P2": _complement(s2, f, "|P2>", tol),
    }
    frame = validate_frame(PentagonFrame(vectors), tol=max(tol, 1e-10))
    logger.debug(f"Built frame for theta1={theta1:.6g}, theta2={theta2:.6g}")
    return frame


@lru_cache(maxsize=1)
def canonical_frame() -> PentagonFrame:
    """Equal-superposition frame with real components."""
    r2, r3, r6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)
    vectors = {
        "1": basis(1),
        "2": basis(2),
        "3": basis(3),
        "S1": ket(0, 1 / r2, 1 / r2),
        "S2": ket(1 / r2, 0, 1 / r2),
        "f": ket(1 / r3, 1 / r3, -1 / r3),
        "D1": ket(0, 1 / r2, -1 / r2),
        "D2": ket(1 / r2, 0, -1 / r2),
        "P1": ket(2 / r6, -1 / r6, 1 / r6),
        "P2": ket(-1 / r6, 2 / r6, 1 / r6),
    }
    return validate_frame(PentagonFrame(vectors))


def with_random_phases(frame: PentagonFrame, rng: np.random.Generator) -> PentagonFrame:
    """Same frame with an independent global phase on every vector."""
    phases = rng.uniform(0.0, 2 * math.pi, size=len(OUTCOMES))
    vectors = {}
    for outcome, phi in zip(OUTCOMES, phases):
        vec = np.exp(1j * phi) * frame.vec(outcome)
        vec.setflags(write=False)
        vectors[outcome] = vec
    return PentagonFrame(vectors)


def context_edges() -> List[Tuple[str, str]]:
    edges = []
    for name in CONTEXT_ORDER:
        a, b, c = CONTEXTS[name]
        edges.extend([(a, b), (a, c), (b, c)])
    return edges


def orthogonality_graph(frame: PentagonFrame, tol: Optional[float] = None) -> Dict[str, Set[str]]:
    """Adjacency of outcomes with |<a|b>| <= tol."""
    tol = config.TOLERANCE if tol is None else tol
    adjacency: Dict[str, Set[str]] = {outcome: set() for outcome in OUTCOMES}
    for i, a in enumerate(OUTCOMES):
        for b in OUTCOMES[i + 1:]:
            if abs(frame.overlap(a, b)) <= tol:
                adjacency[a].add(b)
                adjacency[b].add(a)
    return adjacency


def graph_edges(adjacency: Dict[str, Set[str]]) -> List[Tuple[str, str]]:
    edges = set()
    for a, neighbours in adjacency.items():
        for b in neighbours:
            edges.add(tuple(sorted((a, b), key=OUTCOMES.index)))
    return sorted(edges, key=lambda e: (OUTCOMES.index(e[0]), OUTCOMES.index(e[1])))


def extra_orthogonalities(frame: PentagonFrame, tol: Optional[float] = None) -> List[Tuple[str, str]]:
    """Orthogonal pairs that are not context edges (none for the canonical frame)."""
    expected = {tuple(sorted(e, key=OUTCOMES.index)) for e in context_edges()}
    return [e for e in graph_edges(orthogonality_graph(frame, tol)) if e not in expected]


@dataclass(frozen=True)
class PathAssignment:
    path: Path
    min_overlap: float

    @property
    def consistent(self) -> bool:
        return self.min_overlap > config.TOLERANCE


def paths(frame: PentagonFrame) -> List[PathAssignment]:
    """The eleven paths, each with the smallest |<a|b>| between its states."""
    result = []
    for path in PATHS:
        states = list(dict.fromkeys(path.assignment))
        overlaps = [
            abs(frame.overlap(a, b)) for i, a in enumerate(states) for b in states[i + 1:]
        ]
        assignment = PathAssignment(path, min(overlaps))
        if not assignment.consistent:
            logger.warning(f"Path {path.label} contains orthogonal states in this frame")
        result.append(assignment)
    return result


def path_by_key(key: str) -> Path:
    for path in PATHS:
        if path.key == key:
            return path
    raise KeyError(key)


def paths_through(context: str, outcome: str) -> List[Path]:
    return [p for p in PATHS if p.outcome_in(context) == outcome]


def reflectivities(frame: PentagonFrame) -> Reflectivities:
    def r(a: str, b: str) -> float:
        return abs(frame.overlap(a, b)) ** 2

    return Reflectivities(
        R1=r("2", "S1"),
        R2=r("1", "S2"),
        RS1=r("D1", "P1"),
        RS2=r("D2", "P2"),
        Rf=r("D1", "D2"),
    )


def inner_product_relations(frame: PentagonFrame) -> Tuple[float, float]:
    """Residuals of the two interference relations that keep |D2> orthogonal to |S2> and |2>."""
    o = frame.overlap
    first = o("1", "D2") * o("D2", "S1") + o("1", "S2") * o("S2", "S1")
    second = o("f", "D2") * o("D2", "S1") + o("f", "2") * o("2", "S1")
    return abs(first), abs(second)


def completeness_residuals(frame: PentagonFrame) -> Dict[str, float]:
    residuals = {}
    for name in CONTEXT_ORDER:
        total = sum(frame.projector(a) for a in CONTEXTS[name])
        residuals[name] = float(np.max(np.abs(total - np.eye(3))))
    return residuals


def context_of(outcomes: Iterable[str]) -> Optional[str]:
    wanted = set(outcomes)
    for name in CONTEXT_ORDER:
        if set(CONTEXTS[name]) == wanted:
            return name
    return None
