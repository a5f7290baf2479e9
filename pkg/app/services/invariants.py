# app/services/invariants.py
"""
Numerical invariants of presented local rings and maps: edim, delta,
the linearized map and its nullity rd, mu of an ideal, and eps2.

Everything in degree one is exact linear algebra on linear parts. mu and
eps2 are computed in the jet algebra and carry a stability flag.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple, Union

from app.algebra.field import FieldSpec
from app.algebra.jet import cached_ideal_span, extend_span, implicit_eliminate, jet_context, mul_trunc
from app.algebra.matrix import Matrix, SparseVector, Subspace, dense_to_sparse, rref
from app.algebra.poly import Poly, linear_part
from app.errors import InternalInconsistency
from app.logger import get_logger
from app.presentations.maps import LocalMapPres, closed_fiber, extend_ideal
from app.presentations.ring import IdealPres, LocalRingPres, _canonical, maximal_ideal, require_ideal_of
from app.services.models import StableValue

logger = get_logger(__name__)


def linear_vector(p: Poly) -> SparseVector:
    return dense_to_sparse(linear_part(p))


@lru_cache(maxsize=1024)
def lin_space(A: LocalRingPres) -> Subspace:
    """lin(I_A): the span of the linear parts of the relations, so m/m^2 = K^n / lin(I_A)."""
    return Subspace.span(A.field, A.n, [linear_vector(r) for r in A.relations])


def edim(A: LocalRingPres) -> int:
    return A.n - lin_space(A).dim


def class_rank(A: LocalRingPres, elements: Sequence[Poly]) -> int:
    """Dimension of the span of the classes of ``elements`` in m/m^2."""
    base = lin_space(A)
    builder = base.builder()
    return builder.extend(linear_vector(p) for p in elements)


def delta(A: LocalRingPres, I: IdealPres) -> int:
    """delta_A(I) = dim (I + m^2)/m^2."""
    require_ideal_of(I, A)
    return class_rank(A, I.gens)


def delta_phi(phi: LocalMapPres, I: IdealPres) -> int:
    """delta^phi_B(I) = delta_B(IB)."""
    return delta(phi.target, extend_ideal(phi, I))


@dataclass(frozen=True)
class LinearizedMap:
    """The matrix of m/m^2 -> n/n^2 on the standard complements of lin(I_A) and lin(I_B)."""

    map: LocalMapPres
    matrix: Matrix
    source_basis: Tuple[str, ...]
    target_basis: Tuple[str, ...]
    rank: int
    nullity: int

    def __str__(self) -> str:
        head = f"[{', '.join(self.source_basis)}] -> [{', '.join(self.target_basis)}]"
        return f"{head}  rank {self.rank}, nullity {self.nullity}\n{self.matrix}"


def _image_class(phi: LocalMapPres, combination: SparseVector, target_lin: Subspace) -> SparseVector:
    """Reduced class in n/n^2 of the image of a linear combination of source variables."""
    F = phi.source.field
    acc: SparseVector = {}
    for i, c in combination.items():
        for k, x in linear_vector(phi.images[i]).items():
            v = F.add(acc.get(k, F.zero), F.mul(c, x))
            if v:
                acc[k] = v
            else:
                acc.pop(k, None)
    return target_lin.reduce(acc)


@lru_cache(maxsize=1024)
def linearized_map(phi: LocalMapPres) -> LinearizedMap:
    A, B = phi.source, phi.target
    F = A.field
    LA, LB = lin_space(A), lin_space(B)
    src = LA.complement_indices()
    tgt = LB.complement_indices()
    # lin(I_A) must land in lin(I_B); make_map guarantees it up to the verified degree
    for pivot, row in zip(LA.pivots, LA.vectors()):
        if _image_class(phi, row, LB):
            raise InternalInconsistency("linear part of a source relation outside lin(I_B)", A.vars[pivot], 0)
    columns = []
    for i in src:
        image = _image_class(phi, {i: F.one}, LB)
        columns.append(tuple(image.get(k, F.zero) for k in tgt))
    rows = tuple(tuple(col[r] for col in columns) for r in range(len(tgt)))
    matrix = Matrix(F, rows, len(src))
    r = rref(matrix).rank
    return LinearizedMap(
        phi,
        matrix,
        tuple(A.vars[i] for i in src),
        tuple(B.vars[k] for k in tgt),
        r,
        len(src) - r,
    )


@lru_cache(maxsize=1024)
def rd(phi: LocalMapPres) -> int:
    """Regularity defect, computed as a nullity and cross-checked against edim A + edim B/mB - edim B."""
    nullity = linearized_map(phi).nullity
    by_edim = edim(phi.source) + edim(closed_fiber(phi)) - edim(phi.target)
    if nullity != by_edim:
        raise InternalInconsistency(f"rd of {phi.label()}: nullity vs edim formula", nullity, by_edim)
    return nullity


def is_basically_regular(phi: LocalMapPres) -> bool:
    return rd(phi) == 0


# --- mu and eps2 ---

def _mu_at(field: FieldSpec, vars: Tuple[str, ...], relations: Tuple[Poly, ...], gens: Tuple[Poly, ...], N: int) -> int:
    """dim of (I_A + gens) / (I_A + m*gens) modulo m^N."""
    ctx = jet_context(field, vars, N)
    gens = tuple(g for g in gens if not g.is_zero())
    if not gens:
        return 0
    shifted = [mul_trunc(ctx.variable(i), g, ctx) for g in gens for i in range(len(vars))]
    W = extend_span(cached_ideal_span(field, vars, relations, N), shifted, ctx)
    return W.builder().extend(ctx.vector(g) for g in gens)


def _stable(field, vars, relations, gens, N: int) -> StableValue:
    values = [_mu_at(field, vars, relations, gens, d) for d in (N, N + 1, N + 2)]
    if len(set(values)) != 1:
        logger.info("mu not stable at degrees %d..%d: %s", N, N + 2, values)
    return StableValue(value=values[0], stable=len(set(values)) == 1, degree=N)


def mu(I: Union[IdealPres, LocalRingPres], N: int | None = None) -> StableValue:
    """mu_A(I) = dim I/mI; a ring stands for its maximal ideal."""
    if isinstance(I, LocalRingPres):
        I = maximal_ideal(I)
    A = I.ring
    return _stable(A.field, A.vars, A.relations, I.gens, N or A.trunc_degree)


def _drop_variable(p: Poly, j: int, vars: Tuple[str, ...]) -> Poly:
    return Poly(p.field, vars, {m[:j] + m[j + 1:]: c for m, c in p.terms.items()})


def minimal_presentation(A: LocalRingPres, N: int) -> Tuple[Tuple[str, ...], Tuple[Poly, ...]]:
    """
    Eliminate variables against relations with a nonzero linear part until every
    remaining relation lies in the square of the maximal ideal (modulo degree N).
    """
    F = A.field
    vars = A.vars
    rels = _canonical(r.truncate(N) for r in A.relations)
    while True:
        pivot = next(
            ((k, j) for k, r in enumerate(rels) for j, c in enumerate(linear_part(r)) if c),
            None,
        )
        if pivot is None:
            return vars, rels
        k, j = pivot
        ctx = jet_context(F, vars, N)
        h = implicit_eliminate(rels[k], j, ctx)
        images = [ctx.variable(i) for i in range(len(vars))]
        images[j] = h
        remaining = vars[:j] + vars[j + 1:]
        rest = []
        for idx, r in enumerate(rels):
            if idx != k:
                rest.append(_drop_variable(r.substitute(images, below=N), j, remaining))
        logger.debug("eliminated %s via %s", vars[j], rels[k])
        vars, rels = remaining, _canonical(rest)


def eps2(A: LocalRingPres, N: int | None = None) -> StableValue:
    """Number of relations of a minimal presentation, as mu of its relation ideal."""
    N = N or A.trunc_degree
    vars, rels = minimal_presentation(A, N + 2)
    return _stable(A.field, vars, (), rels, N)
