# app/services/dimension.py
"""Krull dimension on decidable presentation classes, and the predicates built on it."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence, Tuple

from app.logger import get_logger
from app.presentations.maps import LocalMapPres, MapTag, closed_fiber
from app.presentations.ring import LocalRingPres
from app.services.invariants import edim
from app.services.models import FlatStatus

logger = get_logger(__name__)

_FLAT_TAGS = {
    MapTag.IDENTITY: "identity",
    MapTag.VARIABLE_ADJUNCTION: "variable adjunction",
    MapTag.POWER_SUBSTITUTION: "power substitution",
    MapTag.ISOMORPHISM: "isomorphism",
}


def min_variable_cover(supports: Sequence[Tuple[int, ...]], n: int) -> int:
    """Smallest set of variable indices meeting every support."""
    sets = [frozenset(s) for s in supports]
    for size in range(n + 1):
        for cover in combinations(range(n), size):
            chosen = set(cover)
            if all(s & chosen for s in sets):
                return size
    return n


def _computed_dim(A: LocalRingPres) -> Optional[int]:
    n = A.n
    rels = A.relations
    if not rels:
        return n
    monomials = [r for r in rels if r.is_monomial()]
    mono_dim = n - min_variable_cover([m.support() for m in monomials], n)
    if len(monomials) == len(rels):
        return mono_dim
    if len(rels) == 1:
        return n - 1
    # Krull: n - r <= dim; the monomial relations alone cut out an upper bound
    if max(0, n - len(rels)) == mono_dim:
        return mono_dim
    return None


@lru_cache(maxsize=1024)
def krull_dim(A: LocalRingPres) -> Optional[int]:
    """Exact on the free, monomial, single-relation and bounded classes; else the override; else None."""
    computed = _computed_dim(A)
    if computed is not None:
        if A.dim_override is not None and A.dim_override != computed:
            logger.warning(
                "ignoring dim_override %d on %s: dimension is %d", A.dim_override, A.label(), computed
            )
        return computed
    return A.dim_override


def cdim(A: LocalRingPres) -> Optional[int]:
    d = krull_dim(A)
    return None if d is None else edim(A) - d


def is_regular(A: LocalRingPres) -> Optional[bool]:
    d = krull_dim(A)
    return None if d is None else edim(A) == d


def flat_witness(phi: LocalMapPres) -> Optional[str]:
    for tag, text in _FLAT_TAGS.items():
        if phi.has(tag):
            return text
    if phi.components and all(flat_witness(c) is not None for c in phi.components):
        return "composite of flat maps"
    return None


def flatness_status(phi: LocalMapPres) -> FlatStatus:
    witness = flat_witness(phi)
    if witness is not None:
        return FlatStatus(kind="Flat", witness=witness)
    dA = krull_dim(phi.source)
    dB = krull_dim(phi.target)
    dF = krull_dim(closed_fiber(phi))
    if None not in (dA, dB, dF) and dB != dA + dF:
        return FlatStatus(kind="NotFlat", witness=f"dim B = {dB} but dim A + dim B/mB = {dA} + {dF}")
    return FlatStatus(kind="Unknown")


def is_weakly_regular(phi: LocalMapPres) -> Optional[bool]:
    """Flat with regular closed fiber; None when neither side is decided."""
    status = flatness_status(phi)
    fiber_regular = is_regular(closed_fiber(phi))
    if status.kind == "Flat" and fiber_regular is True:
        return True
    if status.kind == "NotFlat" or fiber_regular is False:
        return False
    return None
