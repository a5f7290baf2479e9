import pytest

from app.algebra import GF, QQ
from app.presentations import (
    closed_fiber,
    compose,
    identity_map,
    make_ideal,
    make_map,
    make_ring,
    maximal_ideal,
    power_extension,
    quotient,
    residue_field,
    square_of_maximal_ideal,
)
from app.services import (
    class_rank,
    delta,
    delta_phi,
    edim,
    eps2,
    invariant_report,
    is_basically_regular,
    linearized_map,
    map_report,
    minimal_presentation,
    mu,
    rd,
)


# --- embedding dimension and delta ---

def test_embedding_dimension(build, plane):
    assert edim(plane) == 2
    assert edim(build(("x", "y"), lambda x, y: [x + y**2])) == 1
    A_m2, _ = quotient(plane, square_of_maximal_ideal(plane))
    assert edim(A_m2) == 2
    assert edim(residue_field(QQ)) == 0


def test_delta_counts_linear_classes(plane, build):
    x, y = plane.variables()
    assert delta(plane, make_ideal(plane, [x + x**2, 2 * x])) == 1
    assert delta(plane, maximal_ideal(plane)) == 2
    assert delta(plane, make_ideal(plane, [x * y])) == 0
    A = build(("x", "y"), lambda x, y: [x - y])
    assert class_rank(A, [A.var(0), A.var(1)]) == 1


def test_delta_along_a_map(square_map, line_t):
    (t,) = line_t.variables()
    assert delta_phi(square_map, make_ideal(line_t, [t])) == 0
    assert delta_phi(identity_map(line_t), make_ideal(line_t, [t])) == 1


# --- regularity defect ---

def test_square_map_has_defect_one(square_map):
    lm = linearized_map(square_map)
    assert lm.source_basis == ("t",) and lm.target_basis == ("y",)
    assert lm.matrix.rows == ((0,),)
    assert lm.nullity == 1
    assert rd(square_map) == 1
    assert not is_basically_regular(square_map)


def test_diagonal_map_has_defect_one(plane):
    U = make_ring(QQ, ("u",))
    (u,) = U.variables()
    phi = make_map(plane, U, [u, u])
    assert linearized_map(phi).rank == 1
    assert rd(phi) == 1


def test_defect_of_canonical_surjections(build):
    A = build(("x", "y"), lambda x, y: [x**2 - y**3])
    _, pi_m = quotient(A, maximal_ideal(A))
    assert rd(pi_m) == edim(A)
    _, pi_m2 = quotient(A, square_of_maximal_ideal(A))
    assert is_basically_regular(pi_m2)


def test_map_out_of_the_residue_field_is_basically_regular(plane):
    K = residue_field(QQ)
    assert is_basically_regular(make_map(K, plane, []))


def test_defect_respects_target_relations(build):
    A = build(("s", "t"))
    B = build(("x", "y"), lambda x, y: [x - y**2])
    x, y = B.variables()
    # s |-> x is y^2 in B, so only t survives linearly
    phi = make_map(A, B, [x, y])
    assert rd(phi) == 1


def test_defect_is_additive_along_adjunctions(build):
    A = build(("x",), lambda x: [x**2])
    adj = power_extension(A, extra_vars=("z",))
    assert rd(adj) == 0
    assert rd(compose(adj, identity_map(adj.target))) == 0


@pytest.mark.parametrize("field", [QQ, GF(2), GF(5)])
def test_identity_is_basically_regular(build, field):
    A = build(("x", "y"), lambda x, y: [x * y + x**3], field=field)
    assert rd(identity_map(A)) == 0


# --- mu and eps2 ---

def test_minimal_number_of_generators(plane, build):
    x, y = plane.variables()
    assert mu(plane).value == 2
    assert mu(plane).stable
    assert mu(make_ideal(plane, [x**2, x * y])).value == 2
    assert mu(make_ideal(plane, [x, x + x**2])).value == 1
    assert mu(make_ideal(plane, [])).value == 0
    A = build(("x", "y"), lambda x, y: [x - y**2])
    assert mu(A).value == 1


def test_mu_reports_its_degree(plane):
    value = mu(plane, N=4)
    assert value.degree == 4


def test_eps2(build):
    assert eps2(build(("x", "y"), lambda x, y: [x**2, x * y])).value == 2
    assert eps2(build(("x", "y"), lambda x, y: [x - y**2, x**2])).value == 1
    assert eps2(build(("x", "y"))).value == 0
    assert eps2(build(("x", "y"), lambda x, y: [x - y**2])).value == 0


def test_minimal_presentation_eliminates_linear_relations(build):
    A = build(("x", "y", "z"), lambda x, y, z: [x - y * z, y**2 - z**3])
    vars, rels = minimal_presentation(A, 6)
    assert vars == ("y", "z")
    assert len(rels) == 1


# --- reports ---

def test_ring_report(build):
    report = invariant_report(build(("x", "y"), lambda x, y: [x * y]))
    assert report.kind == "ring"
    assert (report.edim, report.dim, report.cdim) == (2, 1, 1)
    assert report.eps2.value == 1
    assert report.ci_defect == 0
    assert report.regular is False


def test_map_report(square_map):
    report = map_report(square_map)
    assert report.rd == 1
    assert report.fiber_edim == 1
    assert report.basically_regular is False
    assert report.flat.kind == "Unknown"


def test_closed_fiber_of_square_map(square_map):
    F = closed_fiber(square_map)
    assert edim(F) == 1
