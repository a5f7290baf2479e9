# app/verify/catalog.py
"""
The statement catalog: every checkable claim about regularity defects,
each bound to the instance shapes it runs on and a check that decides it
on one instance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from app.algebra.poly import Poly
from app.config import settings
from app.errors import RegDefectError, ShapeMismatch
from app.logger import get_logger
from app.presentations.diagram import Orientation, square, triangle
from app.presentations.maps import (
    LocalMapPres,
    closed_fiber,
    compose,
    contained_in_m2,
    double_induced_map,
    extend_ideal,
    identity_map,
    induced_map,
    quotient,
    quotient_map,
)
from app.presentations.ring import (
    IdealPres,
    LocalRingPres,
    make_ideal,
    maximal_ideal,
    square_of_maximal_ideal,
)
from app.services.diagram_calculus import (
    base_change_square,
    base_change_triangle,
    fiber_arrow,
    rd_of_fiber_surjection,
    residue_base_change,
    square_rd,
    triangle_rd,
)
from app.services.dimension import cdim, flatness_status, is_regular, is_weakly_regular, krull_dim
from app.services.invariants import (
    class_rank,
    delta,
    delta_phi,
    edim,
    eps2,
    lin_space,
    linearized_map,
    mu,
    rd,
)
from app.services.models import StableValue
from app.verify.generator import GenParams, Instance, InstanceGenerator, Shape

logger = get_logger(__name__)


class StatementId(str, Enum):
    IMAGE_INDEPENDENCE_PULLS_BACK = "image_independence_pulls_back"
    DELTA_DROP_BOUNDED = "delta_drop_bounded"
    DELTA_IS_EDIM_DROP = "delta_is_edim_drop"
    DELTA_ADDITIVE = "delta_additive"
    DELTA_PEELS_BASIS = "delta_peels_basis"
    DEFECT_FORMULA = "defect_formula"
    DEFECT_WHEN_FIBER_IS_FIELD = "defect_when_fiber_is_field"
    DELTA_PHI_EXTENDABLE = "delta_phi_extendable"
    ONE_BASIS_SUFFICES = "one_basis_suffices"
    BASIC_REGULARITY_EQUIVALENCES = "basic_regularity_equivalences"
    WEAK_IMPLIES_BASIC = "weak_implies_basic"
    FLAT_BASIC_EQUIVALENCES = "flat_basic_equivalences"
    QUOTIENT_DEFECT_IS_DELTA = "quotient_defect_is_delta"
    QUOTIENT_DEFECT_MONOTONE = "quotient_defect_monotone"
    SQUARE_IS_TRIANGLE_SUM = "square_is_triangle_sum"
    SQUARE_BASE_CHANGE = "square_base_change"
    SQUARE_BASIC_CRITERIA = "square_basic_criteria"
    QUOTIENT_SQUARE_IS_BASIC = "quotient_square_is_basic"
    TRIANGLE_BASE_CHANGE = "triangle_base_change"
    COMPOSITE_DEFECT_BOUNDS = "composite_defect_bounds"
    SURJECTION_TRIANGLE_IS_BASIC = "surjection_triangle_is_basic"
    COMPOSITE_BASIC_CRITERIA = "composite_basic_criteria"
    INDUCED_TRIANGLE_FORMULA = "induced_triangle_formula"
    DOUBLE_QUOTIENT_KEEPS_DEFECT = "double_quotient_keeps_defect"
    SQUARE_QUOTIENT_KEEPS_DEFECT = "square_quotient_keeps_defect"
    BASIC_SURVIVES_QUOTIENTS = "basic_survives_quotients"
    TRUNCATION_BASIC_NOT_WEAK = "truncation_basic_not_weak"
    SQUARE_TRUNCATION_NOT_FLAT = "square_truncation_not_flat"
    REGULAR_TARGET_EQUIVALENCES = "regular_target_equivalences"
    FLAT_DEVIATION_ADDITIVITY = "flat_deviation_additivity"
    MU_OF_MAXIMAL_IDEAL = "mu_of_maximal_ideal"


# Claims the catalog does not check, reported by ``explain --list``.
OUT_OF_SCOPE: Dict[str, str] = {
    "minimal_cohen_presentation": (
        "rd of a map equals rd of the induced map out of a minimal Cohen presentation; "
        "needs completions, which truncated jets do not model"
    ),
    "structure_map_defect": (
        "rd of the structure map of a complete local ring over its coefficient ring; "
        "needs coefficient rings of mixed characteristic"
    ),
}

# Kind of result each statement is, and the identity it is anchored on.
ANCHORS: Dict[StatementId, str] = {
    StatementId.IMAGE_INDEPENDENCE_PULLS_BACK: "Lemma: independence of images in n/n^2 pulls back to m/m^2",
    StatementId.DELTA_DROP_BOUNDED: "Lemma: delta^phi_B(I) <= delta_A(I) <= delta^phi_B(I) + rd(phi)",
    StatementId.DELTA_IS_EDIM_DROP: "Lemma: delta_A(I) = edim A - edim A/I",
    StatementId.DELTA_ADDITIVE: "Corollary: delta_A(J) = delta_A(I) + delta_{A/I}(J/I)",
    StatementId.DELTA_PEELS_BASIS: "Corollary: delta_A(I) = r + delta_{A/(a)}(I/(a))",
    StatementId.DEFECT_FORMULA: "Proposition: rd(phi) = edim A + edim B/mB - edim B",
    StatementId.DEFECT_WHEN_FIBER_IS_FIELD: "Corollary: mB = n gives rd(phi) = edim A - edim B",
    StatementId.DELTA_PHI_EXTENDABLE: "Lemma: delta^phi_B(I) counts elements of I that extend to a minimal basis of n",
    StatementId.ONE_BASIS_SUFFICES: "Lemma: one minimal basis of m extends iff every one does",
    StatementId.BASIC_REGULARITY_EQUIVALENCES: "Theorem: four characterizations of rd(phi) = 0",
    StatementId.WEAK_IMPLIES_BASIC: "Corollary: weakly regular implies basically regular",
    StatementId.FLAT_BASIC_EQUIVALENCES: "Corollary: flat phi is weakly regular iff rd = 0 and cdim A = cdim B",
    StatementId.FLAT_DEVIATION_ADDITIVITY: "Theorem: flat phi has rd(phi) = eps2 A + eps2 B/mB - eps2 B",
    StatementId.REGULAR_TARGET_EQUIVALENCES: "Theorem: phi basically regular with B regular iff phi weakly regular with A regular",
    StatementId.MU_OF_MAXIMAL_IDEAL: "Definition: mu_A(m) = edim A",
    StatementId.QUOTIENT_DEFECT_IS_DELTA: "Corollary: rd(pi_I) = delta_A(I) and rd(pi_m) = edim A",
    StatementId.QUOTIENT_DEFECT_MONOTONE: "Corollary: rd(pi_I) >= rd(pi_IB)",
    StatementId.SQUARE_IS_TRIANGLE_SUM: "Remark: rd(S) = rd(upper triangle) + rd(lower triangle)",
    StatementId.SQUARE_BASE_CHANGE: "Theorem: rd(S) = rd((A/I) (x) S)",
    StatementId.SQUARE_BASIC_CRITERIA: "Corollary: S is basic iff K (x) S is basic",
    StatementId.QUOTIENT_SQUARE_IS_BASIC: "Corollary: rd(phi_I) = rd(phi) - (rd(pi_I) - rd(pi_IB))",
    StatementId.TRIANGLE_BASE_CHANGE: "Corollary: rd(T) = rd(psi_mB)",
    StatementId.COMPOSITE_DEFECT_BOUNDS: "Corollary: rd(phi) <= rd(psi phi) <= rd(phi) + rd(psi)",
    StatementId.SURJECTION_TRIANGLE_IS_BASIC: "Corollary: phi surjective gives rd(psi phi) = rd(phi) + rd(psi)",
    StatementId.COMPOSITE_BASIC_CRITERIA: "Corollary: basic regularity of psi phi against phi and psi",
    StatementId.INDUCED_TRIANGLE_FORMULA: "Proposition: rd(phi_{I,J}) = rd(phi_I) + rd(pi_{J/IB}) - rd(pi_{(J+mB)/mB})",
    StatementId.DOUBLE_QUOTIENT_KEEPS_DEFECT: "Corollary: I in m^2 and J in n^2 give rd(phi_{I,J}) = rd(phi)",
    StatementId.SQUARE_QUOTIENT_KEEPS_DEFECT: "Corollary: rd(pi_J phi) = rd(phi) for J in n^2",
    StatementId.BASIC_SURVIVES_QUOTIENTS: "Corollary: basic regularity passes to phi_I and phi_{I,J}",
    StatementId.TRUNCATION_BASIC_NOT_WEAK: "Proposition: pi_{n^2} phi is basically regular and not flat",
    StatementId.SQUARE_TRUNCATION_NOT_FLAT: "Corollary: pi_{m^2} is basically regular and not flat",
}


class SkipReason(str, Enum):
    UNKNOWN_BLOCKED = "Unknown-blocked"
    UNSTABLE_MU = "unstable-mu"
    OUT_OF_CLASS = "out-of-class"


class Replay(BaseModel):
    seed: int
    shape: str
    session: str


class Verdict(BaseModel):
    statement: StatementId
    digest: str
    outcome: str  # "pass" | "fail" | "skipped"
    reason: Optional[SkipReason] = None
    details: Optional[str] = None
    replay: Optional[Replay] = None

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    @property
    def failed(self) -> bool:
        return self.outcome == "fail"


class SkipCheck(Exception):
    def __init__(self, reason: SkipReason, detail: str):
        self.reason = reason
        self.detail = detail
        super().__init__(detail)


class Checker:
    """Collects failed expectations; raises SkipCheck when a value is undecided."""

    def __init__(self, basis_samples: Optional[int] = None):
        self.failures: List[str] = []
        self.basis_samples = basis_samples or settings.BASIS_SAMPLES

    def expect(self, condition: bool, message: str) -> None:
        if not condition:
            self.failures.append(message)

    def equal(self, left, right, what: str) -> None:
        if left != right:
            self.failures.append(f"{what}: {left} != {right}")

    def skip(self, reason: SkipReason, detail: str):
        raise SkipCheck(reason, detail)

    def known(self, value, what: str):
        if value is None:
            raise SkipCheck(SkipReason.UNKNOWN_BLOCKED, f"{what} is Unknown")
        return value

    def stable(self, value: StableValue, what: str) -> int:
        if not value.stable:
            raise SkipCheck(SkipReason.UNSTABLE_MU, f"{what} not stable at degree {value.degree}")
        return value.value


CheckFn = Callable[[Instance, Checker], None]


@dataclass(frozen=True)
class Statement:
    id: StatementId
    shapes: Tuple[Shape, ...]
    claim: str
    check: CheckFn
    anchor: str = ""


CATALOG: Dict[StatementId, Statement] = {}


def statement(sid: StatementId, shapes: Sequence[Shape], claim: str):
    def register(fn: CheckFn) -> CheckFn:
        CATALOG[sid] = Statement(sid, tuple(shapes), claim, fn, ANCHORS[sid])
        return fn

    return register


# --- helpers ---

def _br(phi: LocalMapPres) -> bool:
    return rd(phi) == 0


def _and3(*values: Optional[bool]) -> Optional[bool]:
    if any(v is False for v in values):
        return False
    if any(v is None for v in values):
        return None
    return True


def _sample_ideals(A: LocalRingPres, I: Optional[IdealPres]) -> List[IdealPres]:
    """I, m, m^2 and each principal (x_i)."""
    out = [maximal_ideal(A), square_of_maximal_ideal(A)]
    if I is not None:
        out.insert(0, I)
    out.extend(make_ideal(A, [x]) for x in A.variables())
    return out


def _square_part(I: IdealPres) -> IdealPres:
    """Generators with their linear terms stripped, so the ideal lies in m^2."""
    return make_ideal(I.ring, [g - g.homogeneous_part(1) for g in I.gens])


def _max_independent_subset(B: LocalRingPres, elements: Sequence[Poly]) -> int:
    best = 0
    for size in range(1, len(elements) + 1):
        for subset in combinations(elements, size):
            if class_rank(B, subset) == size:
                best = size
                break
    return best


def _fiber_quotients(phi: LocalMapPres, theta: LocalMapPres) -> Tuple[LocalMapPres, LocalMapPres]:
    """pi_{mB} and pi_{mC} for a composable pair with composite theta."""
    m = maximal_ideal(phi.source)
    return quotient_map(extend_ideal(phi, m)), quotient_map(extend_ideal(theta, m))


def _square_of(inst: Instance, orientation: Orientation = Orientation.CLOCKWISE):
    """The instance's square: S_{I,J} for quotient squares, (phi, psi, id, psi o phi) for pairs."""
    if inst.shape is Shape.QUOTIENT_SQUARE:
        phi, I, J = inst.phi, inst.ideal, inst.ideal2
        return square(phi, quotient_map(J), quotient_map(I), double_induced_map(phi, I, J), orientation)
    theta = compose(inst.phi, inst.psi)
    return square(inst.phi, inst.psi, identity_map(inst.phi.source), theta, orientation)


# --- statements about delta ---

@statement(
    StatementId.IMAGE_INDEPENDENCE_PULLS_BACK,
    (Shape.MAP,),
    "If phi(a_1..a_r) is part of a minimal basis of n (classes independent in n/n^2), "
    "then a_1..a_r is part of a minimal basis of m.",
)
def _image_independence(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    A, B = phi.source, phi.target
    for elements in (list(inst.ideal.gens), list(A.variables())):
        for size in range(1, len(elements) + 1):
            for subset in combinations(elements, size):
                if class_rank(B, [phi.apply(a) for a in subset]) == size:
                    c.expect(
                        class_rank(A, subset) == size,
                        f"images of {', '.join(map(str, subset))} are independent but the elements are not",
                    )


@statement(
    StatementId.DELTA_DROP_BOUNDED,
    (Shape.MAP, Shape.FLAT_FAMILY),
    "0 <= delta_A(I) - delta^phi_B(I) <= rd(phi) for every ideal I of A.",
)
def _delta_drop(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    r = rd(phi)
    for I in _sample_ideals(phi.source, inst.ideal):
        drop = delta(phi.source, I) - delta_phi(phi, I)
        c.expect(0 <= drop <= r, f"delta drop {drop} for {I.label()} outside [0, {r}]")


@statement(
    StatementId.DELTA_IS_EDIM_DROP,
    (Shape.MAP,),
    "delta_A(I) = edim A - edim A/I and delta^phi_B(I) = edim B - edim B/IB.",
)
def _delta_edim(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    A, B = phi.source, phi.target
    for I in _sample_ideals(A, inst.ideal):
        A_I, _ = quotient(A, I)
        B_I, _ = quotient(B, extend_ideal(phi, I))
        c.equal(delta(A, I), edim(A) - edim(A_I), f"delta_A({I.label()})")
        c.equal(delta_phi(phi, I), edim(B) - edim(B_I), f"delta^phi({I.label()})")


@statement(
    StatementId.DELTA_ADDITIVE,
    (Shape.RING_WITH_IDEAL,),
    "For I in J: delta_A(J) = delta_A(I) + delta_{A/I}(J/I), and rd is additive along A -> A/I -> A/J.",
)
def _delta_additive(inst: Instance, c: Checker) -> None:
    A, I, J = inst.ring, inst.ideal, inst.ideal2
    A_I, pi_I = quotient(A, I)
    J_mod = make_ideal(A_I, J.gens)
    c.equal(delta(A, J), delta(A, I) + delta(A_I, J_mod), "delta additivity")
    pi_rest = quotient_map(J_mod)
    through = compose(pi_I, pi_rest)
    A_J, pi_J = quotient(A, J)
    c.expect(through.target.same_presentation(A_J), "A/I/(J/I) differs from A/J")
    c.equal(rd(through), rd(pi_I) + rd(pi_rest), "rd of the composite quotient")
    c.equal(rd(pi_J), rd(through), "rd(pi_J) vs the composite")


@statement(
    StatementId.DELTA_PEELS_BASIS,
    (Shape.RING_WITH_IDEAL,),
    "If a_1..a_r in I are part of a minimal basis of m, then delta_A(I) = r + delta_{A/(a)}(I/(a)).",
)
def _delta_peels(inst: Instance, c: Checker) -> None:
    A, I = inst.ring, inst.ideal
    chosen: List[Poly] = []
    for g in I.gens:
        if class_rank(A, chosen + [g]) == len(chosen) + 1:
            chosen.append(g)
    A_a, _ = quotient(A, make_ideal(A, chosen))
    c.equal(delta(A, I), len(chosen) + delta(A_a, make_ideal(A_a, I.gens)), "delta after peeling")


@statement(
    StatementId.DELTA_PHI_EXTENDABLE,
    (Shape.MAP,),
    "delta^phi_B(I) is the largest number of elements of I whose images are part of a minimal basis of n.",
)
def _delta_phi_extendable(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    for I in (inst.ideal, maximal_ideal(phi.source)):
        best = _max_independent_subset(phi.target, [phi.apply(g) for g in I.gens])
        c.equal(best, delta_phi(phi, I), f"delta^phi({I.label()}) vs exhaustive search")


# --- statements about rd of one map ---

@statement(
    StatementId.DEFECT_FORMULA,
    (Shape.MAP, Shape.FLAT_FAMILY),
    "rd(phi) = delta_A(m) - delta^phi_B(m) = edim A + edim B/mB - edim B.",
)
def _defect_formula(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    A, B = phi.source, phi.target
    m = maximal_ideal(A)
    nullity = linearized_map(phi).nullity
    c.equal(nullity, delta(A, m) - delta_phi(phi, m), "rd vs delta difference")
    c.equal(nullity, edim(A) + edim(closed_fiber(phi)) - edim(B), "rd vs edim formula")


@statement(
    StatementId.DEFECT_WHEN_FIBER_IS_FIELD,
    (Shape.MAP, Shape.SURJECTION_TRIANGLE),
    "If mB = n then rd(phi) = edim A - edim B.",
)
def _defect_fiber_field(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    if edim(closed_fiber(phi)) == 0:
        c.equal(rd(phi), edim(phi.source) - edim(phi.target), "rd when mB = n")


@statement(
    StatementId.ONE_BASIS_SUFFICES,
    (Shape.MAP, Shape.FLAT_FAMILY),
    "If phi extends one minimal basis of m to part of a minimal basis of n it extends all of them, "
    "and this happens exactly when rd(phi) = 0.",
)
def _one_basis(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    A, B = phi.source, phi.target
    free = lin_space(A).complement_indices()
    e = len(free)
    params = GenParams(field=str(A.field), trunc_degree=A.trunc_degree, max_vars=max(A.n, 1))
    gen = InstanceGenerator(params, random.Random(f"{inst.seed}:bases"))
    outcomes = []
    for sample in range(c.basis_samples):
        P = gen.invertible_matrix(e) if sample else None
        basis = []
        for j in range(e):
            b = gen.element(A.vars, min_order=2)
            for k, i in enumerate(free):
                coef = (1 if k == j else 0) if P is None else P.rows[k][j]
                if coef:
                    b = b + A.var(i).scale(coef)
            basis.append(b)
        c.expect(class_rank(A, basis) == e, f"sampled basis {sample} is not a minimal basis of m")
        outcomes.append(class_rank(B, [phi.apply(b) for b in basis]) == e)
    c.expect(all(outcomes) or not any(outcomes), "some sampled bases extend and others do not")
    c.equal(all(outcomes), _br(phi), "basis extends vs rd = 0")


@statement(
    StatementId.BASIC_REGULARITY_EQUIVALENCES,
    (Shape.MAP, Shape.FLAT_FAMILY),
    "rd(phi) = 0 iff phi extends a minimal basis of m iff delta_A(I) = delta^phi_B(I) for all I "
    "iff edim B = edim A + edim B/mB.",
)
def _br_equivalences(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    A, B = phi.source, phi.target
    br = _br(phi)
    free = lin_space(A).complement_indices()
    extends = class_rank(B, [phi.apply(A.var(i)) for i in free]) == len(free)
    deltas_agree = all(delta(A, I) == delta_phi(phi, I) for I in _sample_ideals(A, inst.ideal))
    edims = edim(B) == edim(A) + edim(closed_fiber(phi))
    c.equal(extends, br, "extends a minimal basis vs rd = 0")
    c.equal(deltas_agree, br, "delta equality on sampled ideals vs rd = 0")
    c.equal(edims, br, "edim additivity vs rd = 0")


@statement(
    StatementId.WEAK_IMPLIES_BASIC,
    (Shape.FLAT_FAMILY, Shape.MAP),
    "A weakly regular map is basically regular.",
)
def _weak_implies_basic(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    if c.known(is_weakly_regular(phi), "weak regularity"):
        c.equal(rd(phi), 0, "rd of a weakly regular map")


@statement(
    StatementId.FLAT_BASIC_EQUIVALENCES,
    (Shape.FLAT_FAMILY,),
    "For flat phi: (rd = 0 and eps2 A = eps2 B) iff (rd = 0 and cdim A = cdim B) iff phi weakly regular.",
)
def _flat_basic(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    A, B = phi.source, phi.target
    if flatness_status(phi).kind != "Flat":
        c.skip(SkipReason.OUT_OF_CLASS, "flatness not witnessed")
    br = _br(phi)
    eA, eB = c.stable(eps2(A), "eps2 A"), c.stable(eps2(B), "eps2 B")
    cA, cB = c.known(cdim(A), "cdim A"), c.known(cdim(B), "cdim B")
    weak = c.known(is_weakly_regular(phi), "weak regularity")
    c.equal(br and eA == eB, weak, "basic with equal eps2 vs weakly regular")
    c.equal(br and cA == cB, weak, "basic with equal cdim vs weakly regular")


@statement(
    StatementId.FLAT_DEVIATION_ADDITIVITY,
    (Shape.FLAT_FAMILY,),
    "For flat phi: rd(phi) = eps2 A + eps2 B/mB - eps2 B, so phi is basically regular iff eps2 B = eps2 A + eps2 B/mB.",
)
def _flat_deviation(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    if flatness_status(phi).kind != "Flat":
        c.skip(SkipReason.OUT_OF_CLASS, "flatness not witnessed")
    eA = c.stable(eps2(phi.source), "eps2 A")
    eB = c.stable(eps2(phi.target), "eps2 B")
    eF = c.stable(eps2(closed_fiber(phi)), "eps2 B/mB")
    c.equal(rd(phi), eA + eF - eB, "rd vs eps2 deviation")
    c.equal(rd(phi) == 0, eB == eA + eF, "rd = 0 vs eps2 additivity")


@statement(
    StatementId.REGULAR_TARGET_EQUIVALENCES,
    (Shape.FLAT_FAMILY, Shape.MAP),
    "(phi basically regular and B regular) iff (A, B/mB regular and dim B = dim A + dim B/mB) "
    "iff (phi weakly regular and A regular).",
)
def _regular_target(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    A, B = phi.source, phi.target
    F = closed_fiber(phi)
    dA, dB, dF = krull_dim(A), krull_dim(B), krull_dim(F)
    dims = None if None in (dA, dB, dF) else dB == dA + dF
    first = _and3(_br(phi), is_regular(B))
    second = _and3(is_regular(A), is_regular(F), dims)
    c.known(first, "regularity of B")
    c.known(second, "regularity of A, B/mB or their dimensions")
    c.equal(first, second, "basic with regular target vs regular source and fiber")
    third = _and3(is_weakly_regular(phi), is_regular(A))
    if third is not None:
        c.equal(third, first, "weakly regular with regular source vs basic with regular target")


@statement(
    StatementId.MU_OF_MAXIMAL_IDEAL,
    (Shape.RING,),
    "mu_A(m) = edim A.",
)
def _mu_of_m(inst: Instance, c: Checker) -> None:
    A = inst.ring
    c.equal(c.stable(mu(A), "mu(m)"), edim(A), "mu(m) vs edim")


# --- quotients ---

@statement(
    StatementId.QUOTIENT_DEFECT_IS_DELTA,
    (Shape.RING_WITH_IDEAL,),
    "rd(pi_I) = delta_A(I) = edim A - edim A/I; pi_I is basically regular iff I is in m^2; rd(pi_m) = edim A.",
)
def _quotient_delta(inst: Instance, c: Checker) -> None:
    A = inst.ring
    for I in _sample_ideals(A, inst.ideal) + [inst.ideal2]:
        pi = quotient_map(I)
        r = rd(pi)
        c.equal(r, delta(A, I), f"rd(pi_{I.label()}) vs delta")
        c.equal(r, edim(A) - edim(pi.target), f"rd(pi_{I.label()}) vs edim drop")
        c.equal(contained_in_m2(I), r == 0, f"{I.label()} in m^2 vs rd = 0")
    c.equal(rd(quotient_map(maximal_ideal(A))), edim(A), "rd(pi_m)")


@statement(
    StatementId.QUOTIENT_DEFECT_MONOTONE,
    (Shape.MAP, Shape.FLAT_FAMILY),
    "rd(pi_I) >= rd(pi_IB) for every I, with equality for all I iff phi is basically regular.",
)
def _quotient_monotone(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    all_equal = True
    for I in _sample_ideals(phi.source, inst.ideal):
        below, above = rd(quotient_map(I)), rd(quotient_map(extend_ideal(phi, I)))
        c.expect(below >= above, f"rd(pi_{I.label()}) = {below} < rd(pi_IB) = {above}")
        all_equal = all_equal and below == above
    c.equal(all_equal, _br(phi), "equality on sampled ideals vs rd = 0")


# --- diagrams ---

@statement(
    StatementId.SQUARE_IS_TRIANGLE_SUM,
    (Shape.QUOTIENT_SQUARE, Shape.COMPOSABLE_PAIR),
    "rd of a square is the sum of the rd of its two triangles, and reversing orientation negates it.",
)
def _square_sum(inst: Instance, c: Checker) -> None:
    values = {}
    for orientation in Orientation:
        S = _square_of(inst, orientation)
        upper, lower = S.triangles()
        values[orientation] = square_rd(S)
        c.equal(values[orientation], triangle_rd(upper) + triangle_rd(lower), f"{orientation.value} square vs triangles")
    c.equal(values[Orientation.CLOCKWISE], -values[Orientation.ANTICLOCKWISE], "orientation reversal")


def _square_values(inst: Instance) -> Tuple[int, int, int, int]:
    S = _square_of(inst)
    phi, psi, phi2, psi2 = S.arrows
    K = inst.base_ideal if inst.base_ideal is not None else inst.ideal
    return (
        square_rd(S),
        square_rd(base_change_square(S, K)),
        square_rd(residue_base_change(S)),
        rd(fiber_arrow(phi, psi)) - rd(fiber_arrow(phi2, psi2)),
    )


@statement(
    StatementId.SQUARE_BASE_CHANGE,
    (Shape.QUOTIENT_SQUARE, Shape.COMPOSABLE_PAIR),
    "rd(S) = rd((A/I) (x) S) = rd(K (x) S) = rd(psi_mB) - rd(psi'_mC).",
)
def _square_base_change(inst: Instance, c: Checker) -> None:
    v, v_I, v_m, v_f = _square_values(inst)
    c.equal(v, v_I, "rd(S) vs base change by I")
    c.equal(v, v_m, "rd(S) vs base change to the residue field")
    c.equal(v, v_f, "rd(S) vs the fiber arrows")


@statement(
    StatementId.SQUARE_BASIC_CRITERIA,
    (Shape.QUOTIENT_SQUARE,),
    "S is basic iff (A/I) (x) S is basic iff K (x) S is basic iff rd(psi_mB) = rd(psi'_mC).",
)
def _square_basic(inst: Instance, c: Checker) -> None:
    v, v_I, v_m, v_f = _square_values(inst)
    c.equal(v == 0, v_I == 0, "basic vs basic after base change by I")
    c.equal(v == 0, v_m == 0, "basic vs basic over the residue field")
    c.equal(v == 0, v_f == 0, "basic vs equal fiber defects")


@statement(
    StatementId.QUOTIENT_SQUARE_IS_BASIC,
    (Shape.QUOTIENT_SQUARE,),
    "The square (phi, pi_IB, pi_I, phi_I) is basic, so rd(phi_I) = rd(phi) - (rd(pi_I) - rd(pi_IB)) <= rd(phi).",
)
def _quotient_square(inst: Instance, c: Checker) -> None:
    phi, I = inst.phi, inst.ideal
    phi_I = induced_map(phi, I)
    pi_I = quotient_map(I)
    pi_IB = quotient_map(extend_ideal(phi, I))
    S = square(phi, pi_IB, pi_I, phi_I)
    c.equal(square_rd(S), 0, "rd of the quotient square")
    c.equal(rd(phi_I), rd(phi) - (rd(pi_I) - rd(pi_IB)), "rd(phi_I)")
    c.expect(rd(phi_I) <= rd(phi), f"rd(phi_I) = {rd(phi_I)} exceeds rd(phi) = {rd(phi)}")


@statement(
    StatementId.TRIANGLE_BASE_CHANGE,
    (Shape.COMPOSABLE_PAIR, Shape.SURJECTION_TRIANGLE),
    "rd(T) = rd((A/I) (x) T) = rd(K (x) T) = rd(psi_mB).",
)
def _triangle_base_change(inst: Instance, c: Checker) -> None:
    phi, psi = inst.phi, inst.psi
    T = triangle(phi, psi)
    v = triangle_rd(T)
    c.equal(v, triangle_rd(base_change_triangle(T, inst.ideal)), "rd(T) vs base change by I")
    c.equal(v, triangle_rd(residue_base_change(T)), "rd(T) vs base change to the residue field")
    c.equal(v, rd(fiber_arrow(phi, psi)), "rd(T) vs rd(psi_mB)")
    degenerate = square(phi, psi, identity_map(phi.source), T.diagonal)
    c.equal(v, square_rd(degenerate), "rd(T) vs the square with an identity side")


@statement(
    StatementId.COMPOSITE_DEFECT_BOUNDS,
    (Shape.COMPOSABLE_PAIR, Shape.SURJECTION_TRIANGLE),
    "rd(psi phi) = rd phi + rd psi - rd psi_mB = rd phi + (rd pi_mB - rd pi_mC), "
    "so rd phi <= rd(psi phi) <= rd phi + rd psi.",
)
def _composite_bounds(inst: Instance, c: Checker) -> None:
    phi, psi = inst.phi, inst.psi
    theta = compose(phi, psi)
    pi_mB, pi_mC = _fiber_quotients(phi, theta)
    r = rd(theta)
    c.equal(r, rd(phi) + rd(psi) - rd(fiber_arrow(phi, psi)), "rd of the composite vs the fiber arrow")
    c.equal(r, rd(phi) + (rd(pi_mB) - rd(pi_mC)), "rd of the composite vs the fiber quotients")
    c.expect(rd(phi) <= r <= rd(phi) + rd(psi), f"rd of the composite {r} outside its bounds")


@statement(
    StatementId.SURJECTION_TRIANGLE_IS_BASIC,
    (Shape.SURJECTION_TRIANGLE,),
    "A triangle whose first arrow is surjective is basic.",
)
def _surjection_triangle(inst: Instance, c: Checker) -> None:
    T = triangle(inst.phi, inst.psi)
    c.equal(triangle_rd(T), 0, "rd of the triangle")
    c.equal(rd(T.diagonal), rd(inst.phi) + rd(inst.psi), "rd of the composite")


@statement(
    StatementId.COMPOSITE_BASIC_CRITERIA,
    (Shape.COMPOSABLE_PAIR, Shape.SURJECTION_TRIANGLE),
    "psi phi is basically regular iff phi is and rd psi = rd psi_mB iff phi is and rd pi_mB = rd pi_mC; "
    "psi is iff psi_mB is and rd(psi phi) = rd phi; both imply the composite is, and conversely when phi is surjective.",
)
def _composite_criteria(inst: Instance, c: Checker) -> None:
    phi, psi = inst.phi, inst.psi
    theta = compose(phi, psi)
    fiber = fiber_arrow(phi, psi)
    pi_mB, pi_mC = _fiber_quotients(phi, theta)
    composite = _br(theta)
    c.equal(composite, _br(phi) and rd(psi) == rd(fiber), "composite vs fiber arrow criterion")
    c.equal(composite, _br(phi) and rd(pi_mB) == rd(pi_mC), "composite vs fiber quotient criterion")
    c.equal(_br(psi), _br(fiber) and rd(theta) == rd(phi), "second arrow criterion")
    if _br(phi) and _br(psi):
        c.expect(composite, "composite of basically regular maps is not basically regular")
    if phi.is_surjection and composite:
        c.expect(_br(phi) and _br(psi), "composite after a surjection is basic but a factor is not")


@statement(
    StatementId.INDUCED_TRIANGLE_FORMULA,
    (Shape.QUOTIENT_SQUARE,),
    "The triangle (phi_I, pi_{J/IB}) has rd = rd(pi_{(J+mB)/mB}), so rd(phi_{I,J}) = "
    "rd(phi_I) + rd(pi_{J/IB}) - rd(pi_{(J+mB)/mB}).",
)
def _induced_triangle(inst: Instance, c: Checker) -> None:
    phi, I, J = inst.phi, inst.ideal, inst.ideal2
    phi_I = induced_map(phi, I)
    pi_J = quotient_map(make_ideal(phi_I.target, J.gens))
    T = triangle(phi_I, pi_J)
    r_F = rd_of_fiber_surjection(phi, J)
    phi_IJ = double_induced_map(phi, I, J)
    c.equal(triangle_rd(T), r_F, "rd of the induced triangle")
    c.equal(rd(phi_IJ), rd(T.diagonal), "phi_{I,J} vs the composite")
    c.equal(rd(phi_IJ), rd(phi_I) + rd(pi_J) - r_F, "rd(phi_{I,J}) via phi_I")
    c.equal(
        rd(phi_IJ),
        rd(phi) - (rd(quotient_map(I)) - rd(quotient_map(extend_ideal(phi, I)))) + rd(pi_J) - r_F,
        "rd(phi_{I,J}) via phi",
    )


@statement(
    StatementId.DOUBLE_QUOTIENT_KEEPS_DEFECT,
    (Shape.QUOTIENT_SQUARE,),
    "If I is in m^2 and J is in n^2 then rd(phi_{I,J}) = rd(phi).",
)
def _double_quotient(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    I2 = _square_part(inst.ideal)
    J2 = make_ideal(phi.target, list(extend_ideal(phi, I2).gens) + list(_square_part(inst.ideal2).gens))
    if contained_in_m2(I2) and contained_in_m2(J2):
        c.equal(rd(double_induced_map(phi, I2, J2)), rd(phi), "rd(phi_{I,J}) for I, J in the squares")


@statement(
    StatementId.SQUARE_QUOTIENT_KEEPS_DEFECT,
    (Shape.QUOTIENT_SQUARE,),
    "If I is in m^2 then rd(phi_I) = rd(phi); if J is in n^2 then rd(pi_J phi) = rd(phi).",
)
def _square_quotient(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    I2 = _square_part(inst.ideal)
    J2 = _square_part(inst.ideal2)
    c.equal(rd(induced_map(phi, I2)), rd(phi), "rd(phi_I) for I in m^2")
    c.equal(rd(compose(phi, quotient_map(J2))), rd(phi), "rd(pi_J phi) for J in n^2")


@statement(
    StatementId.BASIC_SURVIVES_QUOTIENTS,
    (Shape.QUOTIENT_SQUARE,),
    "If phi is basically regular, so are phi_I, pi_J phi for J in n^2, and phi_{I,J} for I in m^2, J in n^2.",
)
def _basic_survives(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    if not _br(phi):
        return
    I2 = _square_part(inst.ideal)
    J2 = make_ideal(phi.target, list(extend_ideal(phi, I2).gens) + list(_square_part(inst.ideal2).gens))
    c.equal(rd(induced_map(phi, inst.ideal)), 0, "rd(phi_I)")
    c.equal(rd(compose(phi, quotient_map(_square_part(inst.ideal2)))), 0, "rd(pi_J phi)")
    c.equal(rd(double_induced_map(phi, I2, J2)), 0, "rd(phi_{I,J})")


@statement(
    StatementId.TRUNCATION_BASIC_NOT_WEAK,
    (Shape.MAP, Shape.FLAT_FAMILY),
    "For basically regular phi: if mB != n and I is in m^2 then phi_{I,n^2} is basically regular with "
    "non-regular fiber; if A is not artinian then pi_{n^2} phi is basically regular and not flat.",
)
def _truncation(inst: Instance, c: Checker) -> None:
    phi = inst.phi
    if not _br(phi):
        return
    B = phi.target
    n2 = square_of_maximal_ideal(B)
    fiber_nontrivial = edim(closed_fiber(phi)) > 0
    if fiber_nontrivial:
        I2 = _square_part(inst.ideal)
        J = make_ideal(B, list(n2.gens) + list(extend_ideal(phi, I2).gens))
        truncated = double_induced_map(phi, I2, J)
        c.equal(rd(truncated), 0, "rd(phi_{I,n^2})")
        c.equal(is_regular(closed_fiber(truncated)), False, "regularity of the fiber of phi_{I,n^2}")
    dA = c.known(krull_dim(phi.source), "dim A")
    if dA > 0:
        chi = compose(phi, quotient_map(n2))
        c.equal(rd(chi), 0, "rd(pi_{n^2} phi)")
        c.equal(flatness_status(chi).kind, "NotFlat", "flatness of pi_{n^2} phi")
        if fiber_nontrivial:
            c.equal(is_regular(closed_fiber(chi)), False, "regularity of the fiber of pi_{n^2} phi")


@statement(
    StatementId.SQUARE_TRUNCATION_NOT_FLAT,
    (Shape.RING,),
    "If A is not artinian then pi_{m^2}: A -> A/m^2 is basically regular and not flat.",
)
def _square_truncation(inst: Instance, c: Checker) -> None:
    A = inst.ring
    dA = c.known(krull_dim(A), "dim A")
    if dA > 0:
        pi = quotient_map(square_of_maximal_ideal(A))
        c.equal(rd(pi), 0, "rd(pi_{m^2})")
        c.equal(flatness_status(pi).kind, "NotFlat", "flatness of pi_{m^2}")


# --- driver ---

def check_statement(sid: StatementId, inst: Instance, basis_samples: Optional[int] = None) -> Verdict:
    """Decide one statement on one instance. ``basis_samples`` defaults to the configured value."""
    entry = CATALOG[StatementId(sid)]
    if inst.shape not in entry.shapes:
        raise ShapeMismatch(entry.id.value, "/".join(s.value for s in entry.shapes), inst.shape.value)
    digest = inst.digest()
    c = Checker(basis_samples)
    try:
        entry.check(inst, c)
    except SkipCheck as skip:
        if not c.failures:
            logger.debug("%s skipped on %s: %s", entry.id.value, digest, skip.detail)
            return Verdict(statement=entry.id, digest=digest, outcome="skipped", reason=skip.reason, details=skip.detail)
    except RegDefectError as e:
        c.failures.append(f"{type(e).__name__}: {e}")
    if not c.failures:
        return Verdict(statement=entry.id, digest=digest, outcome="pass")
    logger.warning("%s failed on instance %s", entry.id.value, digest)
    return Verdict(
        statement=entry.id,
        digest=digest,
        outcome="fail",
        details="; ".join(c.failures),
        replay=Replay(seed=inst.seed, shape=inst.shape.value, session=inst.session()),
    )


def explain(sid: StatementId) -> str:
    entry = CATALOG[StatementId(sid)]
    shapes = ", ".join(s.value for s in entry.shapes)
    return f"{entry.id.value}\n  anchor: {entry.anchor}\n  checks: {entry.claim}\n  runs on: {shapes}"
