from app.algebra.field import GF, QQ, FieldSpec, Scalar
from app.algebra.matrix import Matrix, RrefResult, SpanBuilder, Subspace, kernel_dim, rank, rref
from app.algebra.poly import Monomial, Poly, linear_part
from app.algebra.jet import (
    JetContext,
    implicit_eliminate,
    jet_context,
    jet_ideal_span,
    mul_trunc,
    substitute_trunc,
)
