# app/presentations/diagram.py
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence, Tuple

import networkx as nx

from app.errors import CompositionMismatch, NonCommutative, RegDefectError
from app.logger import get_logger
from app.presentations.maps import LocalMapPres, compose

logger = get_logger(__name__)


class Orientation(str, Enum):
    CLOCKWISE = "clockwise"
    ANTICLOCKWISE = "anticlockwise"

    @property
    def sign(self) -> int:
        return 1 if self is Orientation.CLOCKWISE else -1

    @property
    def opposite(self) -> "Orientation":
        return Orientation.ANTICLOCKWISE if self is Orientation.CLOCKWISE else Orientation.CLOCKWISE


class DiagramKind(str, Enum):
    TRIANGLE = "triangle"
    SQUARE = "square"


# corner labels and arrow layout per kind: (tail, head) for each declared arrow
_LAYOUT = {
    DiagramKind.TRIANGLE: (("A", "B"), ("B", "C")),
    DiagramKind.SQUARE: (("A", "B"), ("B", "D"), ("A", "C"), ("C", "D")),
}


@dataclass(frozen=True)
class DiagramShape:
    """
    An oriented commutative triangle A -phi-> B -psi-> C, or a square with
    arrows phi: A->B, psi: B->D, phi2: A->C, psi2: C->D.

    ``diagonal`` is psi o phi in both cases.
    """

    kind: DiagramKind
    arrows: Tuple[LocalMapPres, ...]
    orientation: Orientation
    diagonal: LocalMapPres
    verified_degree: int
    name: str = field(default="", compare=False)

    @property
    def phi(self) -> LocalMapPres:
        return self.arrows[0]

    @property
    def psi(self) -> LocalMapPres:
        return self.arrows[1]

    def graph(self) -> nx.DiGraph:
        return build_graph(self.kind, self.arrows)

    def triangles(self) -> Tuple["DiagramShape", "DiagramShape"]:
        """The triangles ABD (same orientation) and ACD (opposite orientation) of a square."""
        if self.kind is not DiagramKind.SQUARE:
            raise RegDefectError("only squares split into triangles")
        phi, psi, phi2, psi2 = self.arrows
        upper = make_diagram(DiagramKind.TRIANGLE, (phi, psi), self.orientation)
        lower = make_diagram(DiagramKind.TRIANGLE, (phi2, psi2), self.orientation.opposite)
        return upper, lower

    def label(self) -> str:
        return self.name or f"{self.kind.value}({', '.join(a.label() for a in self.arrows)})"


def build_graph(kind: DiagramKind, arrows: Sequence[LocalMapPres]) -> nx.DiGraph:
    """Corners as nodes (carrying their rings), arrows as edges (carrying their maps)."""
    G = nx.DiGraph()
    for (tail, head), arrow in zip(_LAYOUT[kind], arrows):
        for corner, ring in ((tail, arrow.source), (head, arrow.target)):
            if corner in G and not G.nodes[corner]["ring"].same_presentation(ring):
                raise CompositionMismatch(
                    f"corner {corner} is {G.nodes[corner]['ring'].label()} on one arrow and {ring.label()} on another"
                )
            G.add_node(corner, ring=ring)
        G.add_edge(tail, head, map=arrow, label=arrow.label())
    return G


def _compose_path(G: nx.DiGraph, path: Sequence[str]) -> LocalMapPres:
    result = G.edges[path[0], path[1]]["map"]
    for tail, head in zip(path[1:], path[2:]):
        result = compose(result, G.edges[tail, head]["map"])
    return result


def _check_commutes(G: nx.DiGraph, start: str, end: str, degree: int) -> LocalMapPres:
    """Compose along every path start -> end and compare modulo the end relations and degree."""
    paths: List[List[str]] = sorted(nx.all_simple_paths(G, start, end))
    composites = [(p, _compose_path(G, p)) for p in paths]
    first_path, first = composites[0]
    ring = G.nodes[end]["ring"]
    ctx = ring.jet(degree)
    span = ring.relation_span(degree)
    for path, other in composites[1:]:
        for a, b in zip(first.images, other.images):
            if not span.contains(ctx.vector(a - b)):
                logger.warning("diagram paths %s and %s disagree", first_path, path)
                raise NonCommutative(degree, first_path, path)
    return first


def make_diagram(
    kind: DiagramKind,
    arrows: Sequence[LocalMapPres],
    orientation: Orientation = Orientation.CLOCKWISE,
    name: str = "",
) -> DiagramShape:
    arrows = tuple(arrows)
    expected = len(_LAYOUT[kind])
    if len(arrows) != expected:
        raise CompositionMismatch(f"a {kind.value} needs {expected} arrows, got {len(arrows)}")
    G = build_graph(kind, arrows)
    degree = min(a.verified_degree for a in arrows)
    end = "C" if kind is DiagramKind.TRIANGLE else "D"
    diagonal = _check_commutes(G, "A", end, degree)
    return DiagramShape(kind, arrows, Orientation(orientation), diagonal, degree, name)


def triangle(phi: LocalMapPres, psi: LocalMapPres, orientation: Orientation = Orientation.CLOCKWISE) -> DiagramShape:
    return make_diagram(DiagramKind.TRIANGLE, (phi, psi), orientation)


def square(
    phi: LocalMapPres,
    psi: LocalMapPres,
    phi2: LocalMapPres,
    psi2: LocalMapPres,
    orientation: Orientation = Orientation.CLOCKWISE,
) -> DiagramShape:
    return make_diagram(DiagramKind.SQUARE, (phi, psi, phi2, psi2), orientation)
