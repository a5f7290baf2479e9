from app.presentations.ring import (
    IdealPres,
    LocalRingPres,
    make_ideal,
    make_ring,
    maximal_ideal,
    require_ideal_of,
    residue_field,
    square_of_maximal_ideal,
)
from app.presentations.maps import (
    LocalMapPres,
    MapTag,
    closed_fiber,
    compose,
    contained_in_m2,
    coordinate_change,
    double_induced_map,
    extend_ideal,
    identity_map,
    induced_map,
    make_map,
    power_extension,
    quotient,
    quotient_map,
)
from app.presentations.diagram import DiagramKind, DiagramShape, Orientation, make_diagram, square, triangle
