# app/presentations/maps.py
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import FrozenSet, Optional, Sequence, Tuple

from app.algebra.jet import substitute_trunc
from app.algebra.matrix import Matrix, rank
from app.algebra.poly import Poly
from app.errors import (
    ArityMismatch,
    CompositionMismatch,
    NonlocalImage,
    NotWellDefinedAtDegree,
    RegDefectError,
    VariableMismatch,
)
from app.logger import get_logger
from app.presentations.ring import (
    IdealPres,
    LocalRingPres,
    _canonical,
    make_ideal,
    make_ring,
    require_ideal_of,
)

logger = get_logger(__name__)


class MapTag(str, Enum):
    IDENTITY = "identity"
    SURJECTION = "surjection"
    VARIABLE_ADJUNCTION = "variable adjunction"
    POWER_SUBSTITUTION = "power substitution"
    ISOMORPHISM = "isomorphism"
    COMPOSITE = "composite"


# tags that survive base change along A -> A/I
_BASE_CHANGE_TAGS = frozenset(
    {MapTag.IDENTITY, MapTag.SURJECTION, MapTag.VARIABLE_ADJUNCTION, MapTag.POWER_SUBSTITUTION, MapTag.ISOMORPHISM}
)


@dataclass(frozen=True)
class LocalMapPres:
    """
    A local homomorphism source -> target sending the i-th source variable
    to ``images[i]``. Well-definedness has been checked modulo n^verified_degree.
    """

    source: LocalRingPres
    target: LocalRingPres
    images: Tuple[Poly, ...]
    verified_degree: int
    tags: FrozenSet[MapTag] = frozenset()
    components: Tuple["LocalMapPres", ...] = ()
    kernel: Optional[IdealPres] = None
    name: str = field(default="", compare=False)

    def has(self, tag: MapTag) -> bool:
        return tag in self.tags

    @property
    def is_surjection(self) -> bool:
        return MapTag.SURJECTION in self.tags or MapTag.IDENTITY in self.tags or MapTag.ISOMORPHISM in self.tags

    def apply(self, p: Poly) -> Poly:
        """Exact image of a source polynomial."""
        return p.substitute(self.images, target_vars=self.target.vars)

    def named(self, name: str) -> "LocalMapPres":
        return replace(self, name=name)

    def label(self) -> str:
        return self.name or f"{self.source.label()} -> {self.target.label()}"

    def __str__(self) -> str:
        pairs = ", ".join(f"{v} |-> {img}" for v, img in zip(self.source.vars, self.images))
        return f"{self.source.label()} -> {self.target.label()} [{pairs}]"


def make_map(
    src: LocalRingPres,
    tgt: LocalRingPres,
    images: Sequence[Poly],
    N: int | None = None,
    tags: FrozenSet[MapTag] = frozenset(),
    components: Tuple[LocalMapPres, ...] = (),
    kernel: Optional[IdealPres] = None,
    name: str = "",
) -> LocalMapPres:
    src.field.require_same(tgt.field)
    if len(images) != src.n:
        raise ArityMismatch(src.n, len(images))
    imgs = []
    for i, img in enumerate(images):
        if isinstance(img, int):
            img = Poly.const(tgt.field, tgt.vars, img)
        if img.vars != tgt.vars:
            img = img.embed(tgt.vars)
        if img.constant_term != 0:
            raise NonlocalImage(i, img)
        imgs.append(img)
    N = N or tgt.trunc_degree
    if src.relations:
        ctx = tgt.jet(N)
        span = tgt.relation_span(N)
        for g in src.relations:
            image = substitute_trunc(g, imgs, ctx)
            if not span.contains(ctx.vector(image)):
                logger.warning("map %s fails on relation %s at degree %d", name or "?", g, N)
                raise NotWellDefinedAtDegree(N, g, image)
    phi = LocalMapPres(src, tgt, tuple(imgs), N, frozenset(tags), tuple(components), kernel, name)
    logger.debug("map %s verified to degree %d", phi.label(), N)
    return phi


def identity_map(A: LocalRingPres) -> LocalMapPres:
    return make_map(A, A, A.variables(), A.trunc_degree, frozenset({MapTag.IDENTITY}), name=f"id_{A.label()}")


def quotient(A: LocalRingPres, I: IdealPres) -> Tuple[LocalRingPres, LocalMapPres]:
    """A/I together with the canonical surjection A -> A/I."""
    require_ideal_of(I, A)
    Q = make_ring(A.field, A.vars, A.relations + I.gens, A.trunc_degree, name=f"{A.label()}/{I.label()}")
    pi = make_map(
        A,
        Q,
        Q.variables(),
        Q.trunc_degree,
        frozenset({MapTag.SURJECTION}),
        kernel=I,
        name=f"pi_{I.label()}",
    )
    return Q, pi


def quotient_map(I: IdealPres) -> LocalMapPres:
    return quotient(I.ring, I)[1]


def extend_ideal(phi: LocalMapPres, I: IdealPres) -> IdealPres:
    """The extended ideal IB, generated by the exact images of the generators of I."""
    require_ideal_of(I, phi.source)
    gens = _canonical(phi.apply(g) for g in I.gens)
    return IdealPres(phi.target, gens, f"{I.label()}B" if I.name else "")


def _base_change_tags(phi: LocalMapPres) -> FrozenSet[MapTag]:
    return frozenset(t for t in phi.tags if t in _BASE_CHANGE_TAGS)


def induced_map(phi: LocalMapPres, I: IdealPres) -> LocalMapPres:
    """phi_I : A/I -> B/IB."""
    require_ideal_of(I, phi.source)
    if I.is_zero():
        return phi
    IB = extend_ideal(phi, I)
    A_I, _ = quotient(phi.source, I)
    B_I, _ = quotient(phi.target, IB)
    components: Tuple[LocalMapPres, ...] = ()
    if phi.components:
        parts = []
        ideal = I
        for part in phi.components:
            parts.append(induced_map(part, ideal))
            ideal = extend_ideal(part, ideal)
        components = tuple(parts)
    kernel = None
    if phi.kernel is not None:
        kernel = make_ideal(A_I, phi.kernel.gens, phi.kernel.name)
    return make_map(
        A_I,
        B_I,
        phi.images,
        phi.verified_degree,
        _base_change_tags(phi) | ({MapTag.COMPOSITE} if components else frozenset()),
        components,
        kernel,
        name=f"{phi.name}_{I.label()}" if phi.name else "",
    )


def double_induced_map(phi: LocalMapPres, I: IdealPres, J: IdealPres) -> LocalMapPres:
    """phi_{I,J} : A/I -> B/J for an ideal J of B containing IB."""
    require_ideal_of(I, phi.source)
    require_ideal_of(J, phi.target)
    A_I, _ = quotient(phi.source, I)
    B_J, _ = quotient(phi.target, J)
    return make_map(A_I, B_J, phi.images, phi.verified_degree, name=f"{phi.name}_{I.label()},{J.label()}" if phi.name else "")


def closed_fiber(phi: LocalMapPres) -> LocalRingPres:
    """B/mB: the target relations together with the images of the source variables."""
    B = phi.target
    return make_ring(B.field, B.vars, B.relations + phi.images, B.trunc_degree, name=f"fiber({phi.label()})")


def compose(phi: LocalMapPres, psi: LocalMapPres) -> LocalMapPres:
    """psi o phi."""
    if not phi.target.same_presentation(psi.source):
        raise CompositionMismatch(
            f"target {phi.target.label()} of {phi.label()} is not the source of {psi.label()}"
        )
    images = [psi.apply(img) for img in phi.images]
    N = min(phi.verified_degree, psi.verified_degree)
    tags = {MapTag.COMPOSITE}
    if phi.is_surjection and psi.is_surjection:
        tags.add(MapTag.SURJECTION)
    name = f"{psi.name}o{phi.name}" if phi.name and psi.name else ""
    return make_map(phi.source, psi.target, images, N, frozenset(tags), (phi, psi), name=name)


def contained_in_m2(I: IdealPres) -> bool:
    """I lies in the square of the maximal ideal iff every linear part lies in lin(I_A)."""
    from app.services.invariants import lin_space, linear_vector

    L = lin_space(I.ring)
    return all(L.contains(linear_vector(g)) for g in I.gens)


def power_extension(
    A: LocalRingPres,
    exponents: Sequence[int] | None = None,
    extra_vars: Sequence[str] = (),
    target_vars: Sequence[str] | None = None,
) -> LocalMapPres:
    """
    x_i |-> y_i^{e_i} into K[y, z]/(r(y^e) : r relation of A).

    This is the base change of a free extension, so it is flat; with every
    exponent 1 it is the adjunction of the variables ``extra_vars``.
    """
    exponents = tuple(exponents or (1,) * A.n)
    if len(exponents) != A.n or any(e < 1 for e in exponents):
        raise RegDefectError("power_extension needs one positive exponent per variable")
    plain = all(e == 1 for e in exponents)
    if target_vars is None:
        base = A.vars if plain else tuple(f"{v}_" for v in A.vars)
        target_vars = tuple(base) + tuple(extra_vars)
    target_vars = tuple(target_vars)
    if len(target_vars) != A.n + len(extra_vars):
        raise VariableMismatch("target variables must cover the source variables and the adjoined ones")
    F = A.field
    powers = [Poly.var(F, target_vars, i).pow(e) for i, e in enumerate(exponents)]
    relations = [r.substitute(powers, target_vars=target_vars) for r in A.relations]
    dim_override = None
    from app.services.dimension import krull_dim

    dA = krull_dim(A)
    if dA is not None:
        dim_override = dA + len(extra_vars)
    B = make_ring(F, target_vars, relations, A.trunc_degree, dim_override, name=f"{A.label()}[{','.join(extra_vars)}]" if plain else "")
    tag = MapTag.VARIABLE_ADJUNCTION if plain else MapTag.POWER_SUBSTITUTION
    return make_map(A, B, powers, A.trunc_degree, frozenset({tag}))


def coordinate_change(B: LocalRingPres, matrix: Matrix) -> LocalMapPres:
    """
    The isomorphism B -> B' sending y_i to sum_j matrix[i][j] y_j, where B'
    carries the transported relations.
    """
    if matrix.nrows != B.n or matrix.ncols != B.n:
        raise RegDefectError(f"coordinate change on {B.n} variables needs a {B.n}x{B.n} matrix")
    if rank(matrix) != B.n:
        raise RegDefectError("coordinate change matrix is singular")
    F = B.field
    ys = B.variables()
    images = []
    for row in matrix.rows:
        img = B.zero()
        for coef, y in zip(row, ys):
            if coef:
                img = img + y.scale(coef)
        images.append(img)
    relations = [r.substitute(images, target_vars=B.vars) for r in B.relations]
    from app.services.dimension import krull_dim

    target = make_ring(F, B.vars, relations, B.trunc_degree, krull_dim(B), name=f"{B.label()}'")
    return make_map(B, target, images, B.trunc_degree, frozenset({MapTag.ISOMORPHISM}))
