from app.services.models import FlatStatus, InvariantReport, StableValue
from app.services.invariants import (
    LinearizedMap,
    class_rank,
    delta,
    delta_phi,
    edim,
    eps2,
    is_basically_regular,
    lin_space,
    linearized_map,
    minimal_presentation,
    mu,
    rd,
)
from app.services.dimension import cdim, flatness_status, is_regular, is_weakly_regular, krull_dim
from app.services.diagram_calculus import (
    base_change_square,
    base_change_triangle,
    diagram_rd,
    fiber_arrow,
    is_basic_diagram,
    rd_of_fiber_surjection,
    residue_base_change,
    square_rd,
    triangle_rd,
)
from app.services.report import invariant_report, map_report
