# app/presentations/ring.py
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Tuple

from app.algebra.field import FieldSpec
from app.algebra.jet import JetContext, cached_ideal_span, jet_context
from app.algebra.matrix import Subspace
from app.algebra.poly import Poly, monomials_of_degree
from app.config import settings
from app.errors import DuplicateVariable, RegDefectError, VariableMismatch
from app.logger import get_logger

logger = get_logger(__name__)


def _canonical(polys: Iterable[Poly]) -> Tuple[Poly, ...]:
    """Drop zeros and repeats, keeping first occurrences in order."""
    seen = set()
    out = []
    for p in polys:
        if p.is_zero() or p in seen:
            continue
        seen.add(p)
        out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class LocalRingPres:
    """
    A local ring K[x_1..x_n] localized at (x_1..x_n), modulo ``relations``.

    The residue field is the coefficient field. ``trunc_degree`` is the
    jet degree used for membership tests in this ring.
    """

    field: FieldSpec
    vars: Tuple[str, ...]
    relations: Tuple[Poly, ...]
    trunc_degree: int
    dim_override: Optional[int] = None
    name: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return len(self.vars)

    def jet(self, N: int | None = None) -> JetContext:
        return jet_context(self.field, self.vars, N or self.trunc_degree)

    def relation_span(self, N: int | None = None) -> Subspace:
        """(relations) + m^N as a subspace of the jet algebra at degree N."""
        return cached_ideal_span(self.field, self.vars, self.relations, N or self.trunc_degree)

    def var(self, i: int) -> Poly:
        return Poly.var(self.field, self.vars, i)

    def variables(self) -> Tuple[Poly, ...]:
        return tuple(self.var(i) for i in range(self.n))

    def zero(self) -> Poly:
        return Poly.zero(self.field, self.vars)

    def same_presentation(self, other: "LocalRingPres") -> bool:
        """Equal field and variables, and equal relation sets."""
        return (
            self.field == other.field
            and self.vars == other.vars
            and frozenset(self.relations) == frozenset(other.relations)
        )

    def with_dim_override(self, value: Optional[int]) -> "LocalRingPres":
        if value is not None and not 0 <= value <= self.n:
            raise RegDefectError(f"dimension override {value} outside [0, {self.n}]")
        return replace(self, dim_override=value)

    def named(self, name: str) -> "LocalRingPres":
        return replace(self, name=name)

    def label(self) -> str:
        return self.name or str(self)

    def __str__(self) -> str:
        body = f"{self.field}[{','.join(self.vars)}]"
        if self.relations:
            body += "/(" + ", ".join(str(r) for r in self.relations) + ")"
        return body


@dataclass(frozen=True)
class IdealPres:
    """An ideal of ``ring`` inside its maximal ideal, given by generators."""

    ring: LocalRingPres
    gens: Tuple[Poly, ...]
    name: str = field(default="", compare=False)

    def is_zero(self) -> bool:
        return not self.gens

    def label(self) -> str:
        return self.name or "(" + ", ".join(str(g) for g in self.gens) + ")"

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.gens) + ")"


def _as_poly(p, field: FieldSpec, vars: Tuple[str, ...]) -> Poly:
    if isinstance(p, Poly):
        field.require_same(p.field)
        if p.vars == vars:
            return p
        return p.embed(vars)
    if isinstance(p, int):
        return Poly.const(field, vars, p)
    raise VariableMismatch(f"expected a polynomial over {vars}, got {p!r}")


def make_ring(
    field: FieldSpec,
    vars: Sequence[str],
    relations: Sequence[Poly] = (),
    N: int | None = None,
    dim_override: Optional[int] = None,
    name: str = "",
) -> LocalRingPres:
    vars = tuple(vars)
    seen = set()
    for v in vars:
        if v in seen:
            raise DuplicateVariable(v)
        seen.add(v)
    N = N or settings.TRUNC_DEGREE
    if N < 2:
        raise RegDefectError(f"truncation degree must be at least 2, got {N}")
    rels = [_as_poly(r, field, vars) for r in relations]
    for r in rels:
        r.require_local(f"relation of {name or 'ring'}")
    ring = LocalRingPres(field, vars, _canonical(rels), N, None, name)
    if dim_override is not None:
        ring = ring.with_dim_override(dim_override)
    logger.debug("ring %s with %d relations", ring.label(), len(ring.relations))
    return ring


def make_ideal(ring: LocalRingPres, gens: Sequence[Poly] = (), name: str = "") -> IdealPres:
    polys = [_as_poly(g, ring.field, ring.vars) for g in gens]
    for g in polys:
        g.require_local(f"generator of ideal {name}".strip())
    return IdealPres(ring, _canonical(polys), name)


def maximal_ideal(ring: LocalRingPres) -> IdealPres:
    return IdealPres(ring, ring.variables(), "m")


def square_of_maximal_ideal(ring: LocalRingPres) -> IdealPres:
    gens = tuple(Poly.monomial(ring.field, ring.vars, m) for m in monomials_of_degree(ring.n, 2))
    return IdealPres(ring, gens, "m^2")


def require_ideal_of(ideal: IdealPres, ring: LocalRingPres) -> None:
    if not ideal.ring.same_presentation(ring):
        raise VariableMismatch(f"ideal {ideal.label()} does not belong to {ring.label()}")


def residue_field(field: FieldSpec, N: int | None = None) -> LocalRingPres:
    return make_ring(field, (), (), N, name="K")
