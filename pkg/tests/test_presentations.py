import pytest

from app.algebra import GF, QQ, Matrix, Poly
from app.errors import (
    ArityMismatch,
    CompositionMismatch,
    DuplicateVariable,
    FieldMismatch,
    NonCommutative,
    NonlocalImage,
    NonzeroConstantTerm,
    NotWellDefinedAtDegree,
    RegDefectError,
)
from app.presentations import (
    DiagramKind,
    MapTag,
    Orientation,
    closed_fiber,
    compose,
    contained_in_m2,
    coordinate_change,
    double_induced_map,
    extend_ideal,
    identity_map,
    induced_map,
    make_diagram,
    make_ideal,
    make_map,
    make_ring,
    maximal_ideal,
    power_extension,
    quotient,
    residue_field,
    square,
    square_of_maximal_ideal,
    triangle,
)
from app.presentations.render import SessionWriter


# --- rings and ideals ---

def test_relation_with_constant_term_is_rejected(build):
    with pytest.raises(NonzeroConstantTerm):
        build(("x",), lambda x: [x + 1])


def test_duplicate_variables_are_rejected():
    with pytest.raises(DuplicateVariable):
        make_ring(QQ, ("x", "x"))


def test_truncation_degree_must_be_at_least_two():
    with pytest.raises(RegDefectError):
        make_ring(QQ, ("x",), N=1)


def test_same_presentation_ignores_names_and_overrides(build):
    A = build(("x", "y"), lambda x, y: [x * y], name="A")
    B = build(("x", "y"), lambda x, y: [x * y], name="B", dim_override=1)
    assert A.same_presentation(B)
    assert not A.same_presentation(build(("x", "y")))


def test_dim_override_range(plane):
    assert plane.with_dim_override(1).dim_override == 1
    with pytest.raises(RegDefectError):
        plane.with_dim_override(3)


def test_ring_printing(build):
    A = build(("x", "y"), lambda x, y: [x * y])
    assert str(A) == "QQ[x,y]/(x*y)"
    assert str(residue_field(QQ)) == "QQ[]"


def test_ideal_generators_embed_from_fewer_variables(plane):
    x = Poly.var(QQ, ("x",), 0)
    I = make_ideal(plane, [x**2])
    assert I.gens[0].vars == ("x", "y")


def test_standard_ideals(plane):
    assert len(maximal_ideal(plane).gens) == 2
    assert len(square_of_maximal_ideal(plane).gens) == 3


def test_contained_in_square_of_maximal_ideal(plane, build):
    x, y = plane.variables()
    assert contained_in_m2(make_ideal(plane, [x**2, x * y]))
    assert not contained_in_m2(make_ideal(plane, [x]))
    # x is a square in QQ[x,y]/(x - y^2)
    A = build(("x", "y"), lambda x, y: [x - y**2])
    assert contained_in_m2(make_ideal(A, [A.var(0)]))


# --- maps ---

def test_map_must_respect_relations(build, line_y):
    A = build(("x",), lambda x: [x**2])
    (y,) = line_y.variables()
    with pytest.raises(NotWellDefinedAtDegree):
        make_map(A, line_y, [y])
    B = build(("y",), lambda y: [y**2])
    assert make_map(A, B, [B.var(0)]).verified_degree == 6


def test_map_images_must_be_local(line_t, line_y):
    (y,) = line_y.variables()
    with pytest.raises(NonlocalImage):
        make_map(line_t, line_y, [y + 1])
    with pytest.raises(ArityMismatch):
        make_map(line_t, line_y, [y, y])


def test_map_fields_must_agree(line_t):
    B = make_ring(GF(5), ("y",))
    with pytest.raises(FieldMismatch):
        make_map(line_t, B, [B.var(0)])


def test_composition_order(build):
    A = build(("t",))
    B = build(("y",))
    C = build(("z",))
    f = make_map(A, B, [B.var(0) ** 2])
    g = make_map(B, C, [C.var(0) + C.var(0) ** 3])
    gf = compose(f, g)
    z = C.var(0)
    assert gf.images == ((z + z**3) ** 2,)
    assert gf.components == (f, g)
    assert MapTag.COMPOSITE in gf.tags
    with pytest.raises(CompositionMismatch):
        compose(g, f)


def test_quotient_map_and_kernel(plane):
    x, y = plane.variables()
    I = make_ideal(plane, [x * y], name="I")
    Q, pi = quotient(plane, I)
    assert Q.relations == (x * y,)
    assert pi.is_surjection
    assert pi.kernel == I


def test_extended_ideal_and_closed_fiber(square_map, line_t):
    (t,) = line_t.variables()
    IB = extend_ideal(square_map, make_ideal(line_t, [t]))
    (y,) = square_map.target.variables()
    assert IB.gens == (y**2,)
    fiber = closed_fiber(square_map)
    assert fiber.relations == (y**2,)


def test_induced_maps(square_map, line_t):
    (t,) = line_t.variables()
    I = make_ideal(line_t, [t**2])
    f_I = induced_map(square_map, I)
    (y,) = square_map.target.variables()
    assert f_I.source.relations == (t**2,)
    assert f_I.target.relations == (y**4,)
    J = make_ideal(square_map.target, [y**2])
    f_IJ = double_induced_map(square_map, I, J)
    assert f_IJ.target.relations == (y**2,)


def test_identity_and_adjunction_tags(plane):
    assert MapTag.IDENTITY in identity_map(plane).tags
    adj = power_extension(plane, extra_vars=("z",))
    assert adj.target.vars == ("x", "y", "z")
    assert MapTag.VARIABLE_ADJUNCTION in adj.tags
    assert adj.target.dim_override == 3


def test_power_extension_transports_relations(build):
    A = build(("x",), lambda x: [x**3])
    phi = power_extension(A, (2,))
    (w,) = phi.target.variables()
    assert phi.target.relations == (w**6,)
    assert MapTag.POWER_SUBSTITUTION in phi.tags


def test_coordinate_change_is_an_isomorphism(build):
    B = build(("x", "y"), lambda x, y: [x * y])
    change = coordinate_change(B, Matrix.from_rows(QQ, [[1, 1], [0, 1]]))
    x, y = B.variables()
    assert change.target.relations == ((x + y) * y,)
    assert MapTag.ISOMORPHISM in change.tags
    with pytest.raises(RegDefectError):
        coordinate_change(B, Matrix.from_rows(QQ, [[1, 1], [1, 1]]))


# --- diagrams ---

def test_triangle_diagonal_is_the_composite(square_map):
    C = make_ring(QQ, ("z",))
    psi = make_map(square_map.target, C, [C.var(0)])
    T = triangle(square_map, psi)
    assert T.kind is DiagramKind.TRIANGLE
    assert T.diagonal.images == (C.var(0) ** 2,)
    assert set(T.graph().nodes) == {"A", "B", "C"}


def test_triangle_corners_must_match(square_map, line_t):
    with pytest.raises(CompositionMismatch):
        triangle(square_map, identity_map(line_t))


def test_square_must_commute(line_t, line_y):
    (y,) = line_y.variables()
    f = make_map(line_t, line_y, [y**2])
    g = make_map(line_t, line_y, [y**3])
    ident = identity_map(line_y)
    with pytest.raises(NonCommutative):
        square(f, ident, g, ident)
    S = square(f, ident, f, ident, Orientation.ANTICLOCKWISE)
    upper, lower = S.triangles()
    assert upper.orientation is Orientation.ANTICLOCKWISE
    assert lower.orientation is Orientation.CLOCKWISE


def test_square_commutes_modulo_relations(build):
    A = build(("t",))
    B = build(("y",), lambda y: [y**2])
    f = make_map(A, B, [B.var(0)])
    g = make_map(A, B, [B.var(0) + B.var(0) ** 2])
    ident = identity_map(B)
    S = make_diagram(DiagramKind.SQUARE, (f, ident, g, ident))
    assert S.verified_degree == 6


def test_arrow_count_is_checked(square_map):
    with pytest.raises(CompositionMismatch):
        make_diagram(DiagramKind.SQUARE, (square_map,))


# --- session rendering ---

def test_session_writer_renders_declarations(square_map):
    w = SessionWriter(QQ)
    a = w.map(square_map, hint="f")
    text = w.text()
    assert a == "f"
    assert text.startswith("field QQ;")
    assert "y^2" in text
