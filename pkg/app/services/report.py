# app/services/report.py
from app.presentations.maps import LocalMapPres, closed_fiber
from app.presentations.ring import LocalRingPres, maximal_ideal
from app.services.dimension import cdim, flatness_status, is_regular, is_weakly_regular, krull_dim
from app.services.invariants import delta, delta_phi, edim, eps2, is_basically_regular, mu, rd
from app.services.models import InvariantReport


def invariant_report(A: LocalRingPres) -> InvariantReport:
    e2 = eps2(A)
    cd = cdim(A)
    return InvariantReport(
        subject=A.label(),
        kind="ring",
        verified_degree=A.trunc_degree,
        edim=edim(A),
        dim=krull_dim(A),
        cdim=cd,
        delta={"m": delta(A, maximal_ideal(A))},
        mu=mu(A),
        eps2=e2,
        ci_defect=None if cd is None or not e2.stable else e2.value - cd,
        regular=is_regular(A),
    )


def map_report(phi: LocalMapPres) -> InvariantReport:
    m = maximal_ideal(phi.source)
    return InvariantReport(
        subject=phi.label(),
        kind="map",
        verified_degree=phi.verified_degree,
        edim=edim(phi.source),
        delta={"m": delta(phi.source, m), "mB": delta_phi(phi, m)},
        rd=rd(phi),
        target_edim=edim(phi.target),
        fiber_edim=edim(closed_fiber(phi)),
        basically_regular=is_basically_regular(phi),
        weakly_regular=is_weakly_regular(phi),
        flat=flatness_status(phi),
    )
