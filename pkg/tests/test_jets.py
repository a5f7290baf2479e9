import pytest

from app.algebra import GF, QQ, Poly, implicit_eliminate, jet_context, jet_ideal_span, mul_trunc, substitute_trunc
from app.errors import NonlocalImage, NotEliminable, RegDefectError


def _vars(field, names):
    return tuple(Poly.var(field, names, i) for i in range(len(names)))


def test_context_basis_is_graded():
    ctx = jet_context(QQ, ("x", "y"), 3)
    assert ctx.dim == 6
    assert [sum(m) for m in ctx.basis] == sorted(sum(m) for m in ctx.basis)
    with pytest.raises(RegDefectError):
        jet_context(QQ, ("x",), 1)


def test_truncated_multiplication():
    ctx = jet_context(QQ, ("x",), 4)
    (x,) = _vars(QQ, ("x",))
    assert mul_trunc(x**2, x**2, ctx).is_zero()
    assert mul_trunc(x, x**2, ctx) == x**3


def test_substitution_into_a_jet():
    ctx = jet_context(QQ, ("u", "v"), 4)
    u, v = _vars(QQ, ("u", "v"))
    x, y = _vars(QQ, ("x", "y"))
    assert substitute_trunc(x + y, [u**2, u + v], ctx) == u**2 + u + v
    # (u+v)^4 vanishes modulo degree 4
    assert substitute_trunc(y**4 + x, [u**2, u + v], ctx) == u**2


def test_substitution_needs_local_images():
    ctx = jet_context(QQ, ("u",), 4)
    (u,) = _vars(QQ, ("u",))
    (x,) = _vars(QQ, ("x",))
    with pytest.raises(NonlocalImage):
        substitute_trunc(x, [u + 1], ctx)


def test_ideal_span_dimensions():
    (x,) = _vars(QQ, ("x",))
    assert jet_ideal_span([x], jet_context(QQ, ("x",), 3)).dim == 2
    x, y = _vars(QQ, ("x", "y"))
    assert jet_ideal_span([x**2, x * y], jet_context(QQ, ("x", "y"), 3)).dim == 2
    # at degree 4 the span also holds x^3, x^2*y, x*y^2
    assert jet_ideal_span([x**2, x * y], jet_context(QQ, ("x", "y"), 4)).dim == 5


def test_ideal_span_over_prime_field():
    F = GF(3)
    x, y = _vars(F, ("x", "y"))
    span = jet_ideal_span([x + y], jet_context(F, ("x", "y"), 3))
    ctx = jet_context(F, ("x", "y"), 3)
    assert span.contains(ctx.vector(x**2 - y**2))
    assert not span.contains(ctx.vector(x))


@pytest.mark.parametrize(
    "relation, expected",
    [
        (lambda x, y: x - y**2, lambda y: y**2),
        (lambda x, y: x + x * y, lambda y: y - y),
        (lambda x, y: x - y - x * y, lambda y: y + y**2 + y**3),
    ],
)
def test_implicit_elimination(relation, expected):
    ctx = jet_context(QQ, ("x", "y"), 4)
    x, y = _vars(QQ, ("x", "y"))
    assert implicit_eliminate(relation(x, y), 0, ctx) == expected(y)


def test_elimination_needs_a_linear_term():
    ctx = jet_context(QQ, ("x", "y"), 4)
    x, y = _vars(QQ, ("x", "y"))
    with pytest.raises(NotEliminable):
        implicit_eliminate(x**2 - y**3, 0, ctx)
