import random
from fractions import Fraction

import pytest
import sympy
from sympy.polys.domains import GF as SympyGF
from sympy.polys.matrices import DomainMatrix

from app.algebra import GF, QQ, FieldSpec, Matrix, Poly, Subspace, kernel_dim, linear_part, rank, rref
from app.errors import FieldMismatch, NonzeroConstantTerm, RegDefectError, VariableMismatch


# --- fields ---

def test_parse_fields():
    assert FieldSpec.parse("QQ") == QQ
    assert FieldSpec.parse("GF(7)") == GF(7)
    assert str(GF(7)) == "GF(7)"
    with pytest.raises(RegDefectError):
        FieldSpec.parse("GF(6)")
    with pytest.raises(RegDefectError):
        FieldSpec.parse("RR")


def test_prime_field_arithmetic():
    F = GF(5)
    assert F(7) == 2
    assert F(-1) == 4
    assert F.mul(F.inv(3), 3) == 1
    assert F(Fraction(1, 2)) == 3
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_random_elements_stay_small(rng):
    values = {QQ.random_element(rng, bound=2) for _ in range(200)}
    assert values <= {Fraction(k) for k in range(-2, 3)}
    assert 0 not in {GF(3).random_element(rng, nonzero=True) for _ in range(50)}


# --- matrices ---

def test_rank_of_dependent_rows():
    assert rank(Matrix.from_rows(QQ, [[1, 2], [2, 4]])) == 1
    assert kernel_dim(Matrix.zero(QQ, 2, 5)) == 5
    assert rank(Matrix.identity(GF(3), 4)) == 4


def test_rref_pivots_and_reduced_form():
    result = rref(Matrix.from_rows(QQ, [[0, 2, 4], [1, 1, 1]]))
    assert result.rank == 2
    assert result.pivots == (0, 1)
    assert result.reduced.rows[0] == (1, 0, -1)
    assert result.reduced.rows[1] == (0, 1, 2)


def _random_rows(rng, field, nrows, ncols):
    # low-rank products keep the dependent case common
    k = rng.randint(0, min(nrows, ncols))
    left = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(nrows)]
    right = [[rng.randint(-3, 3) for _ in range(ncols)] for _ in range(k)]
    return [[sum(left[i][t] * right[t][j] for t in range(k)) for j in range(ncols)] for i in range(nrows)]


@pytest.mark.parametrize("seed", range(25))
def test_rank_matches_sympy_over_rationals(seed):
    rng = random.Random(seed)
    nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
    rows = [[Fraction(x, rng.randint(1, 4)) for x in row] for row in _random_rows(rng, QQ, nrows, ncols)]
    ours = rank(Matrix.from_rows(QQ, rows))
    assert ours == sympy.Matrix(rows).rank()
    assert kernel_dim(Matrix.from_rows(QQ, rows)) == ncols - ours


@pytest.mark.parametrize("p", [2, 3, 5, 101])
@pytest.mark.parametrize("seed", range(10))
def test_rank_matches_sympy_over_prime_fields(p, seed):
    rng = random.Random(seed * 1000 + p)
    nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
    rows = _random_rows(rng, GF(p), nrows, ncols)
    K = SympyGF(p)
    oracle = DomainMatrix([[K(x) for x in row] for row in rows], (nrows, ncols), K).rank()
    assert rank(Matrix.from_rows(GF(p), rows)) == oracle


def test_matrix_product():
    a = Matrix.from_rows(QQ, [[1, 2], [0, 1]])
    b = Matrix.from_rows(QQ, [[1], [1]])
    assert (a * b).rows == ((3,), (1,))


def test_ragged_rows_are_rejected():
    with pytest.raises(RegDefectError):
        Matrix(QQ, ((1, 2), (3,)), 2)


def test_subspace_membership_and_complement():
    S = Subspace.span(QQ, 3, [(1, 1, 0), (2, 2, 0)])
    assert S.dim == 1
    assert S.contains((3, 3, 0))
    assert not S.contains((1, 0, 0))
    assert S.complement_indices() == (1, 2)
    assert S.join(Subspace.span(QQ, 3, [(0, 0, 1)])).dim == 2


# --- polynomials ---

def test_polynomial_arithmetic_and_printing():
    vars = ("x", "y")
    x, y = Poly.var(QQ, vars, 0), Poly.var(QQ, vars, 1)
    p = 3 * x**2 * y + 2 * x
    assert str(p) == "3*x^2*y + 2*x"
    assert str(y - x) == "-x + y"
    assert str(x.scale(Fraction(1, 2))) == "1/2*x"
    assert (x + y) ** 2 == x**2 + 2 * x * y + y**2
    assert (x - x).is_zero()
    assert p.degree() == 3 and p.order() == 1
    assert p.support() == (0, 1)


def test_truncated_product_drops_high_terms():
    x = Poly.var(QQ, ("x",), 0)
    assert x.mul(x, below=2).is_zero()
    assert (x**2).pow(3, below=7) == x**6


def test_linear_part():
    vars = ("x", "y")
    x, y = Poly.var(QQ, vars, 0), Poly.var(QQ, vars, 1)
    assert linear_part(3 * x - 2 * y + x * y) == (3, -2)
    with pytest.raises(NonzeroConstantTerm):
        linear_part(x + 1)


def test_mixing_variables_or_fields_fails():
    x = Poly.var(QQ, ("x",), 0)
    y = Poly.var(QQ, ("y",), 0)
    with pytest.raises(VariableMismatch):
        x + y
    with pytest.raises(FieldMismatch):
        x + Poly.var(GF(5), ("x",), 0)


def test_embed_and_substitute():
    x = Poly.var(QQ, ("x",), 0)
    big = (x**2).embed(("y", "x"))
    assert str(big) == "x^2"
    u = Poly.var(QQ, ("u",), 0)
    assert (x**2 + x).substitute([u + u**2]) == u**4 + 2 * u**3 + 2 * u**2 + u


def test_prime_field_coefficients_print_as_residues():
    x = Poly.var(GF(5), ("x",), 0)
    assert str(-x) == "4*x"
