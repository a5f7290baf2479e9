import pytest

from app.algebra import QQ
from app.errors import RegDefectError
from app.presentations import (
    DiagramKind,
    Orientation,
    compose,
    double_induced_map,
    identity_map,
    make_ideal,
    make_map,
    make_ring,
    maximal_ideal,
    quotient_map,
    square,
    triangle,
)
from app.services import (
    base_change_square,
    base_change_triangle,
    diagram_rd,
    fiber_arrow,
    is_basic_diagram,
    rd,
    rd_of_fiber_surjection,
    residue_base_change,
    square_rd,
    triangle_rd,
)


@pytest.fixture
def z_line():
    return make_ring(QQ, ("z",))


@pytest.fixture
def basic_triangle(square_map, z_line):
    """QQ[t] -> QQ[y] -> QQ[z], t |-> y^2, y |-> z."""
    psi = make_map(square_map.target, z_line, [z_line.var(0)], name="g")
    return triangle(square_map, psi)


def test_triangle_defect(basic_triangle):
    assert triangle_rd(basic_triangle) == 0
    assert is_basic_diagram(basic_triangle)


def test_orientation_flips_the_sign(square_map, line_y):
    (y,) = line_y.variables()
    cube = make_map(line_y, line_y, [y**3])
    T = triangle(identity_map(square_map.source), compose(square_map, cube))
    U = triangle(square_map, cube)
    assert triangle_rd(U) == rd(square_map) + rd(cube) - rd(compose(square_map, cube))
    assert triangle_rd(U) == 1
    flipped = triangle(square_map, cube, Orientation.ANTICLOCKWISE)
    assert triangle_rd(flipped) == -1
    assert triangle_rd(T) == 0


def test_quotient_square_is_basic(square_map, line_t):
    (t,) = line_t.variables()
    I = make_ideal(line_t, [t])
    (y,) = square_map.target.variables()
    J = make_ideal(square_map.target, [y**2])
    S = square(square_map, quotient_map(J), quotient_map(I), double_induced_map(square_map, I, J))
    assert S.kind is DiagramKind.SQUARE
    assert square_rd(S) == 0


def test_square_equals_sum_of_its_triangles(square_map, line_y):
    (y,) = line_y.variables()
    cube = make_map(line_y, line_y, [y**3])
    S = square(square_map, cube, identity_map(square_map.source), compose(square_map, cube))
    upper, lower = S.triangles()
    assert square_rd(S) == triangle_rd(upper) + triangle_rd(lower)


def test_degenerate_square_matches_its_triangle(square_map, line_y):
    (y,) = line_y.variables()
    cube = make_map(line_y, line_y, [y**3])
    S = square(square_map, cube, identity_map(square_map.source), compose(square_map, cube))
    assert square_rd(S) == triangle_rd(triangle(square_map, cube))
    for orientation in Orientation:
        So = square(square_map, cube, identity_map(square_map.source), compose(square_map, cube), orientation)
        To = triangle(square_map, cube, orientation)
        assert diagram_rd(So) == diagram_rd(To)


def test_wrong_kind_is_rejected(basic_triangle):
    with pytest.raises(RegDefectError):
        square_rd(basic_triangle)


def test_base_change_of_a_triangle(basic_triangle, line_t):
    (t,) = line_t.variables()
    changed = base_change_triangle(basic_triangle, make_ideal(line_t, [t**2]))
    assert changed.kind is DiagramKind.TRIANGLE
    assert changed.phi.source.relations == (t**2,)
    z = changed.diagonal.target.var(0)
    assert changed.diagonal.target.relations == (z**4,)
    assert base_change_triangle(basic_triangle, make_ideal(line_t, [])) is basic_triangle


def test_residue_base_change_of_a_square_shares_the_far_corner(square_map, line_y):
    (y,) = line_y.variables()
    cube = make_map(line_y, line_y, [y**3])
    S = square(square_map, cube, identity_map(square_map.source), compose(square_map, cube))
    K = residue_base_change(S)
    _, psi, _, psi2 = K.arrows
    assert psi.target.same_presentation(psi2.target)
    assert base_change_square(S, maximal_ideal(square_map.source)).verified_degree == K.verified_degree


def test_fiber_arrow(square_map, z_line):
    psi = make_map(square_map.target, z_line, [z_line.var(0)])
    arrow = fiber_arrow(square_map, psi)
    (y,) = square_map.target.variables()
    (z,) = z_line.variables()
    assert arrow.source.relations == (y**2,)
    assert arrow.target.relations == (z**2,)
    assert rd(arrow) == 0


def test_fiber_surjection_defect(square_map):
    (y,) = square_map.target.variables()
    assert rd_of_fiber_surjection(square_map, make_ideal(square_map.target, [y])) == 1
    assert rd_of_fiber_surjection(square_map, make_ideal(square_map.target, [y**2])) == 0
