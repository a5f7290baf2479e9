# app/algebra/jet.py
"""Jet algebra K[x]/(x)^N: truncated products, substitutions and ideal spans.

Everything a local computation needs modulo a power of the maximal ideal
reduces to finite-dimensional linear algebra in the monomial basis below N.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Sequence, Tuple

from app.algebra.field import FieldSpec
from app.algebra.matrix import SparseVector, SpanBuilder, Subspace
from app.algebra.poly import Monomial, Poly, monomials_below, unit_monomial
from app.errors import ArityMismatch, NonlocalImage, NotEliminable, RegDefectError
from app.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class JetContext:
    field: FieldSpec
    vars: Tuple[str, ...]
    trunc_degree: int
    basis: Tuple[Monomial, ...] = field(init=False, repr=False, compare=False)
    index: Dict[Monomial, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.trunc_degree < 2:
            raise RegDefectError(f"truncation degree must be at least 2, got {self.trunc_degree}")
        object.__setattr__(self, "vars", tuple(self.vars))
        basis = monomials_below(len(self.vars), self.trunc_degree)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "index", {m: i for i, m in enumerate(basis)})

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def N(self) -> int:
        return self.trunc_degree

    def vector(self, p: Poly) -> SparseVector:
        """Jet coordinates of p (terms of degree >= N are dropped)."""
        return {self.index[m]: c for m, c in p.terms.items() if sum(m) < self.trunc_degree}

    def poly(self, vec: SparseVector) -> Poly:
        return Poly(self.field, self.vars, {self.basis[i]: c for i, c in vec.items()})

    def truncate(self, p: Poly) -> Poly:
        return p.truncate(self.trunc_degree)

    def variable(self, i: int) -> Poly:
        return Poly.var(self.field, self.vars, i)


@lru_cache(maxsize=256)
def jet_context(field: FieldSpec, vars: Tuple[str, ...], trunc_degree: int) -> JetContext:
    return JetContext(field, tuple(vars), trunc_degree)


def mul_trunc(p: Poly, q: Poly, ctx: JetContext) -> Poly:
    return p.mul(q, below=ctx.trunc_degree)


def substitute_trunc(p: Poly, images: Sequence[Poly], ctx: JetContext) -> Poly:
    """p(images) in the jet algebra of ctx; images must lie in the maximal ideal."""
    if len(images) != p.nvars:
        raise ArityMismatch(p.nvars, len(images))
    for i, img in enumerate(images):
        if img.constant_term != 0:
            raise NonlocalImage(i, img)
    images = [ctx.truncate(img) for img in images]
    return p.substitute(images, below=ctx.trunc_degree, target_vars=ctx.vars)


def _multiples(gens: Sequence[Poly], ctx: JetContext):
    """Jet vectors of monomial * g for every generator g and every monomial keeping degree < N."""
    N = ctx.trunc_degree
    for g in gens:
        g.require_local("ideal generator")
        g = ctx.truncate(g)
        if g.is_zero():
            continue
        low = g.order()
        for mono in ctx.basis:
            if sum(mono) + low >= N:
                # basis is graded, so every later monomial is too high as well
                break
            shifted = {}
            for m, c in g.terms.items():
                if sum(m) + sum(mono) < N:
                    shifted[ctx.index[tuple(a + b for a, b in zip(m, mono))]] = c
            yield shifted


def jet_ideal_span(gens: Sequence[Poly], ctx: JetContext) -> Subspace:
    """The subspace ((gens) + (x)^N) / (x)^N of the jet algebra."""
    builder = SpanBuilder(ctx.field, ctx.dim)
    builder.extend(_multiples(gens, ctx))
    return builder.freeze()


def extend_span(span: Subspace, gens: Sequence[Poly], ctx: JetContext) -> Subspace:
    builder = span.builder()
    builder.extend(_multiples(gens, ctx))
    return builder.freeze()


@lru_cache(maxsize=512)
def cached_ideal_span(field: FieldSpec, vars: Tuple[str, ...], gens: Tuple[Poly, ...], trunc_degree: int) -> Subspace:
    return jet_ideal_span(gens, jet_context(field, vars, trunc_degree))


def implicit_eliminate(g: Poly, j: int, ctx: JetContext) -> Poly:
    """Solve g = 0 for x_j as a jet in the remaining variables.

    Iterates h <- h - g(x_j = h) / c from h = 0, where c is the linear
    coefficient of x_j; the error gains one order per step.
    """
    c = g.coefficient(unit_monomial(g.nvars, j))
    if g.constant_term != 0:
        raise NonlocalImage(j, g)
    if c == 0:
        raise NotEliminable(g.vars[j])
    F = ctx.field
    inv_c = F.inv(c)
    g = ctx.truncate(g)
    images = [ctx.variable(i) for i in range(len(ctx.vars))]
    h = Poly.zero(F, ctx.vars)
    for _ in range(ctx.trunc_degree + 1):
        images[j] = h
        residual = g.substitute(images, below=ctx.trunc_degree)
        if residual.is_zero():
            return h
        h = h - residual.scale(inv_c)
    logger.debug("implicit elimination of %s reached the iteration cap", g.vars[j])
    return h
