# app/verify/generator.py
"""
Seeded random instances for the statement catalog.

Every instance is a pure function of (params, shape, seed). Relation sets
lean toward monomials so that Krull dimensions stay decidable.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.algebra.field import FieldSpec
from app.algebra.matrix import Matrix, rank
from app.algebra.poly import Poly
from app.config import settings
from app.errors import GenerationExhausted, NotWellDefinedAtDegree, RegDefectError
from app.logger import get_logger
from app.presentations.maps import (
    LocalMapPres,
    compose,
    coordinate_change,
    extend_ideal,
    make_map,
    power_extension,
    quotient,
)
from app.presentations.render import SessionWriter
from app.presentations.ring import IdealPres, LocalRingPres, make_ideal, make_ring

logger = get_logger(__name__)

_POOLS = (
    ("x", "y", "z", "w", "v", "u"),
    ("a", "b", "c", "d", "e", "k"),
    ("p", "q", "r", "s", "t", "h"),
)

MONOMIAL_BIAS = 0.65
COORDINATE_CHANGE_RATE = 0.3


class GenParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    field: str = "GF(5)"
    max_vars: int = Field(4, ge=0)
    max_relations: int = Field(3, ge=0)
    # a degree bound of 0 admits no nonzero element of the maximal ideal
    max_gen_degree: int = Field(3, ge=1)
    max_ideal_gens: int = Field(3, ge=0)
    trunc_degree: int = Field(default_factory=lambda: settings.TRUNC_DEGREE, ge=2)
    seed: int = Field(0, ge=0, lt=2**64)
    max_retries: int = Field(default_factory=lambda: settings.MAX_RETRIES, ge=1)
    basis_samples: int = Field(default_factory=lambda: settings.BASIS_SAMPLES, ge=1)

    @field_validator("field")
    @classmethod
    def _known_field(cls, value: str) -> str:
        try:
            return str(FieldSpec.parse(value))
        except RegDefectError as e:
            raise ValueError(str(e)) from None

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field)


class Shape(str, Enum):
    RING = "Ring"
    RING_WITH_IDEAL = "RingWithIdeal"
    MAP = "Map"
    COMPOSABLE_PAIR = "ComposablePair"
    QUOTIENT_SQUARE = "QuotientSquare"
    FLAT_FAMILY = "FlatFamily"
    SURJECTION_TRIANGLE = "SurjectionTriangle"


@dataclass(frozen=True)
class Instance:
    """
    One generated instance. Which slots are filled depends on the shape:

    - Ring: ring
    - RingWithIdeal: ring, ideal I, ideal2 J containing I
    - Map, FlatFamily: phi, ideal of its source
    - ComposablePair: phi, psi, ideal of the source of phi
    - QuotientSquare: phi, ideal I of A, ideal2 J of B containing IB, base_ideal of A
    - SurjectionTriangle: ring A, ideal I, phi = pi_I, psi out of A/I
    """

    shape: Shape
    seed: int
    field: FieldSpec
    ring: Optional[LocalRingPres] = None
    ideal: Optional[IdealPres] = None
    ideal2: Optional[IdealPres] = None
    phi: Optional[LocalMapPres] = None
    psi: Optional[LocalMapPres] = None
    base_ideal: Optional[IdealPres] = None

    def session(self) -> str:
        """Session text declaring every ring, ideal and map of the instance."""
        degree = self.phi.verified_degree if self.phi else (self.ring.trunc_degree if self.ring else None)
        writer = SessionWriter(self.field, degree)
        if self.ring is not None:
            writer.ring(self.ring, "A")
        if self.phi is not None:
            writer.map(self.phi, "f")
        if self.psi is not None:
            writer.map(self.psi, "g")
        if self.ideal is not None:
            writer.ideal(self.ideal, "I")
        if self.ideal2 is not None:
            writer.ideal(self.ideal2, "J")
        if self.base_ideal is not None:
            writer.ideal(self.base_ideal, "K0")
        return writer.text()

    def digest(self) -> str:
        return hashlib.sha256(self.session().encode()).hexdigest()[:16]


def trial_seed(seed: int, trial: int) -> int:
    return (seed * 1_000_003 + trial) & (2**64 - 1)


def _names(pool: int, n: int) -> tuple:
    letters = _POOLS[pool % len(_POOLS)]
    if n <= len(letters):
        return letters[:n]
    return tuple(f"{letters[0]}{i}" for i in range(n))


class InstanceGenerator:
    """Draws rings, ideals and maps from one seeded stream."""

    def __init__(self, params: GenParams, rng: random.Random):
        self.params = params
        self.rng = rng
        self.field = params.field_spec
        self.N = params.trunc_degree

    # --- elements ---

    def monomial(self, n: int, degree: int) -> tuple:
        exps = [0] * n
        for _ in range(degree):
            exps[self.rng.randrange(n)] += 1
        return tuple(exps)

    def element(self, vars: Sequence[str], min_order: int = 1, monomial_bias: float = MONOMIAL_BIAS) -> Poly:
        """A random element of the maximal ideal (or of its square when min_order is 2)."""
        n = len(vars)
        top = max(self.params.max_gen_degree, min_order)
        if n == 0:
            return Poly.zero(self.field, vars)
        terms = 1 if self.rng.random() < monomial_bias else self.rng.randint(2, 3)
        out = Poly.zero(self.field, vars)
        for _ in range(terms):
            mono = self.monomial(n, self.rng.randint(min_order, top))
            out = out + Poly.monomial(self.field, vars, mono, self.field.random_element(self.rng, nonzero=True))
        return out

    def invertible_matrix(self, n: int) -> Matrix:
        for _ in range(self.params.max_retries):
            rows = [[self.field.random_element(self.rng) for _ in range(n)] for _ in range(n)]
            m = Matrix.from_rows(self.field, rows, n)
            if rank(m) == n:
                return m
        return Matrix.identity(self.field, n)

    # --- presentations ---

    def ring(self, pool: int = 0) -> LocalRingPres:
        p = self.params
        n = self.rng.randint(1, p.max_vars) if p.max_vars else 0
        vars = _names(pool, n)
        rels = [self.element(vars) for _ in range(self.rng.randint(0, p.max_relations))]
        return make_ring(self.field, vars, rels, self.N)

    def ideal(self, ring: LocalRingPres, extra_of: Optional[IdealPres] = None) -> IdealPres:
        min_order = 2 if self.rng.random() < 0.3 else 1
        gens = [self.element(ring.vars, min_order) for _ in range(self.rng.randint(0, self.params.max_ideal_gens))]
        if extra_of is not None:
            gens = list(extra_of.gens) + gens
        return make_ideal(ring, gens)

    def map_from(self, A: LocalRingPres, pool: int, shape: Shape) -> LocalMapPres:
        retries = self.params.max_retries
        for attempt in range(retries):
            B = self.ring(pool)
            images = [self.element(B.vars, monomial_bias=0.5) for _ in range(A.n)]
            if A.relations and (self.rng.random() < 0.5 or attempt == retries - 1):
                transported = [g.substitute(images, target_vars=B.vars) for g in A.relations]
                B = make_ring(self.field, B.vars, B.relations + tuple(transported), self.N)
            try:
                return make_map(A, B, images, self.N)
            except NotWellDefinedAtDegree:
                logger.debug("redrawing map for %s (attempt %d)", shape.value, attempt + 1)
        raise GenerationExhausted(shape.value, retries)

    def flat_map(self, A: LocalRingPres) -> LocalMapPres:
        top = max((r.degree() for r in A.relations), default=0)
        doubling_ok = 2 * top <= self.N - 2
        exponents = [2 if doubling_ok and self.rng.random() < 0.5 else 1 for _ in range(A.n)]
        room = max(0, self.params.max_vars - A.n)
        extras = [v for v in _names(1, room) if v not in A.vars][: self.rng.randint(0, room)]
        phi = power_extension(A, exponents, extras)
        if phi.target.n and self.rng.random() < COORDINATE_CHANGE_RATE:
            tau = coordinate_change(phi.target, self.invertible_matrix(phi.target.n))
            phi = compose(phi, tau)
        return phi

    # --- shapes ---

    def generate(self, shape: Shape, seed: int) -> Instance:
        F = self.field
        if shape is Shape.RING:
            return Instance(shape, seed, F, ring=self.ring())
        if shape is Shape.RING_WITH_IDEAL:
            A = self.ring()
            I = self.ideal(A)
            return Instance(shape, seed, F, ring=A, ideal=I, ideal2=self.ideal(A, extra_of=I))
        if shape is Shape.MAP:
            A = self.ring()
            phi = self.map_from(A, 1, shape)
            return Instance(shape, seed, F, phi=phi, ideal=self.ideal(A))
        if shape is Shape.COMPOSABLE_PAIR:
            A = self.ring()
            phi = self.map_from(A, 1, shape)
            psi = self.map_from(phi.target, 2, shape)
            return Instance(shape, seed, F, phi=phi, psi=psi, ideal=self.ideal(A))
        if shape is Shape.QUOTIENT_SQUARE:
            A = self.ring()
            phi = self.map_from(A, 1, shape)
            I = self.ideal(A)
            J = self.ideal(phi.target, extra_of=extend_ideal(phi, I))
            return Instance(shape, seed, F, phi=phi, ideal=I, ideal2=J, base_ideal=self.ideal(A))
        if shape is Shape.FLAT_FAMILY:
            A = self.ring()
            return Instance(shape, seed, F, phi=self.flat_map(A), ideal=self.ideal(A))
        if shape is Shape.SURJECTION_TRIANGLE:
            A = self.ring()
            I = self.ideal(A)
            _, pi = quotient(A, I)
            psi = self.map_from(pi.target, 2, shape)
            return Instance(shape, seed, F, ring=A, ideal=I, phi=pi, psi=psi)
        raise RegDefectError(f"unknown shape {shape}")


def gen_instance(params: GenParams, shape: Shape, seed: Optional[int] = None) -> Instance:
    """The instance of ``shape`` determined by ``seed`` (default: params.seed)."""
    seed = params.seed if seed is None else seed
    rng = random.Random(f"{seed}:{shape.value}")
    return InstanceGenerator(params, rng).generate(shape, seed)


def random_elements(params: GenParams, vars: Sequence[str], count: int, seed: int, min_order: int = 1) -> List[Poly]:
    """Seeded random elements, used by checks that sample inside an instance."""
    gen = InstanceGenerator(params, random.Random(f"{seed}:elements:{min_order}"))
    return [gen.element(vars, min_order) for _ in range(count)]
