# app/services/diagram_calculus.py
from __future__ import annotations

from app.errors import InternalInconsistency, RegDefectError
from app.presentations.diagram import DiagramKind, DiagramShape, make_diagram
from app.presentations.maps import LocalMapPres, closed_fiber, extend_ideal, induced_map, make_map, quotient, quotient_map
from app.presentations.ring import IdealPres, make_ideal, maximal_ideal, require_ideal_of
from app.services.invariants import rd


def triangle_rd(T: DiagramShape) -> int:
    """(rd phi + rd psi) - rd(psi o phi), negated for the anticlockwise orientation."""
    if T.kind is not DiagramKind.TRIANGLE:
        raise RegDefectError(f"{T.label()} is not a triangle")
    return T.orientation.sign * (rd(T.phi) + rd(T.psi) - rd(T.diagonal))


def square_rd(S: DiagramShape) -> int:
    """(rd phi + rd psi) - (rd phi2 + rd psi2), negated for the anticlockwise orientation."""
    if S.kind is not DiagramKind.SQUARE:
        raise RegDefectError(f"{S.label()} is not a square")
    phi, psi, phi2, psi2 = S.arrows
    value = S.orientation.sign * ((rd(phi) + rd(psi)) - (rd(phi2) + rd(psi2)))
    upper, lower = S.triangles()
    by_triangles = triangle_rd(upper) + triangle_rd(lower)
    if value != by_triangles:
        raise InternalInconsistency(f"rd of square {S.label()} vs its two triangles", value, by_triangles)
    return value


def diagram_rd(D: DiagramShape) -> int:
    return triangle_rd(D) if D.kind is DiagramKind.TRIANGLE else square_rd(D)


def is_basic_diagram(D: DiagramShape) -> bool:
    return diagram_rd(D) == 0


def _reduce_onto(arrow: LocalMapPres, reduced_source, reduced_target, degree: int) -> LocalMapPres:
    return make_map(reduced_source, reduced_target, arrow.images, degree)


def base_change_triangle(T: DiagramShape, I: IdealPres) -> DiagramShape:
    """(A/I) (x)_A T: A/I -> B/IB -> C/IC."""
    require_ideal_of(I, T.phi.source)
    if I.is_zero():
        return T
    phi_I = induced_map(T.phi, I)
    C_I, _ = quotient(T.diagonal.target, extend_ideal(T.diagonal, I))
    psi_I = _reduce_onto(T.psi, phi_I.target, C_I, T.verified_degree)
    return make_diagram(DiagramKind.TRIANGLE, (phi_I, psi_I), T.orientation)


def base_change_square(S: DiagramShape, I: IdealPres) -> DiagramShape:
    """
    (A/I) (x)_A S. The far corner is D/ID with ID generated by the images of I
    along the diagonal, shared by both paths.
    """
    phi, psi, phi2, psi2 = S.arrows
    require_ideal_of(I, phi.source)
    if I.is_zero():
        return S
    D_I, _ = quotient(S.diagonal.target, extend_ideal(S.diagonal, I))
    phi_I = induced_map(phi, I)
    phi2_I = induced_map(phi2, I)
    psi_I = _reduce_onto(psi, phi_I.target, D_I, S.verified_degree)
    psi2_I = _reduce_onto(psi2, phi2_I.target, D_I, S.verified_degree)
    return make_diagram(DiagramKind.SQUARE, (phi_I, psi_I, phi2_I, psi2_I), S.orientation)


def residue_base_change(D: DiagramShape) -> DiagramShape:
    """K (x)_A D."""
    ideal = maximal_ideal(D.phi.source)
    if D.kind is DiagramKind.TRIANGLE:
        return base_change_triangle(D, ideal)
    return base_change_square(D, ideal)


def fiber_arrow(phi: LocalMapPres, psi: LocalMapPres) -> LocalMapPres:
    """psi_{mB}: B/mB -> C/mC, where m is the maximal ideal of the source of phi."""
    return induced_map(psi, extend_ideal(phi, maximal_ideal(phi.source)))


def rd_of_fiber_surjection(phi: LocalMapPres, J: IdealPres) -> int:
    """rd of B/mB -> B/(J + mB), for an ideal J of the target of phi."""
    require_ideal_of(J, phi.target)
    fiber = closed_fiber(phi)
    return rd(quotient_map(make_ideal(fiber, J.gens)))
