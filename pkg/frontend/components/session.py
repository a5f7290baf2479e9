# frontend/components/session.py
"""Execute a parsed session against the presentations and invariants layers."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_serializer

from app.algebra.field import FieldSpec
from app.algebra.poly import Poly
from app.config import settings
from app.errors import FieldMismatch, RegDefectError, SessionError
from app.logger import get_logger
from app.presentations.diagram import DiagramKind, DiagramShape, Orientation, make_diagram
from app.presentations.maps import (
    LocalMapPres,
    closed_fiber,
    compose,
    contained_in_m2,
    induced_map,
    make_map,
    quotient,
)
from app.presentations.ring import IdealPres, LocalRingPres, make_ideal, make_ring
from app.services.diagram_calculus import (
    base_change_square,
    base_change_triangle,
    diagram_rd,
    is_basic_diagram,
    square_rd,
    triangle_rd,
)
from app.services.dimension import cdim, flatness_status, is_regular, is_weakly_regular, krull_dim
from app.services.invariants import delta, delta_phi, edim, eps2, is_basically_regular, linearized_map, mu, rd
from app.services.models import StableValue
from app.services.report import invariant_report, map_report
from frontend.components.parser import (
    BinOp,
    CheckQuery,
    ComposeDecl,
    ComputeQuery,
    DiagramDecl,
    Expr,
    FieldDecl,
    IdealDecl,
    InducedDecl,
    MapDecl,
    Neg,
    Num,
    Pow,
    QuotientDecl,
    RingDecl,
    SessionAst,
    SetOption,
    Var,
    recursion_headroom,
)

logger = get_logger(__name__)

MAX_EXPONENT = 64


class SessionOptions(BaseModel):
    trunc_degree: int = Field(default_factory=lambda: settings.TRUNC_DEGREE, ge=2)


class ReportOptions(BaseModel):
    field: Optional[str] = None
    trunc_degree: int


class ReportEntry(BaseModel):
    """One query result; compute queries carry ``value``, check queries carry ``verdict``."""

    query: str
    subject: str
    kind: Literal["compute", "check"] = "compute"
    value: Any = None
    verdict: Optional[bool] = None
    caveats: List[str] = Field(default_factory=list)

    @model_serializer
    def _serialize(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"query": self.query, "subject": self.subject}
        if self.kind == "check":
            out["verdict"] = self.verdict
        else:
            out["value"] = self.value
        out["caveats"] = list(self.caveats)
        return out

    def text(self) -> str:
        shown = self.verdict if self.kind == "check" else self.value
        if shown is None:
            shown = "Unknown"
        elif isinstance(shown, bool):
            shown = str(shown).lower()
        elif isinstance(shown, dict):
            shown = ", ".join(f"{k}={v}" for k, v in shown.items() if v is not None)
        line = f"{self.query} {self.subject} = {shown}"
        if "\n" in line:
            line = line.replace("\n", "\n    ")
        if self.caveats:
            line += f"  [{'; '.join(self.caveats)}]"
        return line


class Report(BaseModel):
    version: str = settings.REPORT_VERSION
    options: ReportOptions
    entries: List[ReportEntry] = Field(default_factory=list)
    failures: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def to_text(self) -> str:
        lines = [entry.text() for entry in self.entries]
        if self.failures:
            lines.append(f"{len(self.failures)} check(s) failed: {', '.join(self.failures)}")
        return "\n".join(lines) + "\n"


Obj = Union[LocalRingPres, IdealPres, LocalMapPres, DiagramShape]


@dataclass
class SessionState:
    trunc_degree: int
    field: Optional[FieldSpec] = None
    objects: Dict[str, Obj] = dc_field(default_factory=dict)


def _degree_caveat(degree: int) -> str:
    return f"verified_degree={degree}"


def _stable_entry(query: str, subject: str, value: StableValue) -> ReportEntry:
    caveats = [_degree_caveat(value.degree)]
    if not value.stable:
        caveats.append("unstable")
    return ReportEntry(query=query, subject=subject, value=value.value, caveats=caveats)


class SessionRunner:
    """Walks the statements in order, keeping declared objects by name."""

    def __init__(self, options: SessionOptions):
        self.options = options
        self.state = SessionState(trunc_degree=options.trunc_degree)
        self.entries: List[ReportEntry] = []
        self.failures: List[str] = []

    # --- lookups ---

    def _get(self, name: str):
        return self.state.objects[name]

    def _field(self) -> FieldSpec:
        if self.state.field is None:
            raise SessionError("no field declared")
        return self.state.field

    # --- polynomial evaluation ---

    def poly(self, e: Expr, vars) -> Poly:
        F = self._field()
        if isinstance(e, Num):
            return Poly.const(F, vars, e.value)
        if isinstance(e, Var):
            return Poly.var(F, vars, vars.index(e.name))
        if isinstance(e, Neg):
            return -self.poly(e.operand, vars)
        if isinstance(e, Pow):
            if e.exponent > MAX_EXPONENT:
                raise SessionError(f"exponent {e.exponent} exceeds {MAX_EXPONENT}", e.span)
            return self.poly(e.base, vars).pow(e.exponent)
        left = self.poly(e.left, vars)
        if e.op == "/":
            divisor = F(e.right.value)
            if divisor == F.zero:
                raise SessionError(f"division by zero in {F}", e.span)
            return left.scale(F.inv(divisor))
        right = self.poly(e.right, vars)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        return left * right

    # --- statements ---

    def run(self, ast: SessionAst) -> Report:
        for stmt in ast.statements:
            try:
                self.execute(stmt)
            except SessionError as e:
                if e.span is None:
                    e.span = stmt.span
                raise
            except RegDefectError as e:
                raise SessionError(f"{type(e).__name__}: {e}", stmt.span) from e
        field_name = str(self.state.field) if self.state.field is not None else None
        return Report(
            options=ReportOptions(field=field_name, trunc_degree=self.state.trunc_degree),
            entries=self.entries,
            failures=self.failures,
        )

    def execute(self, stmt) -> None:
        objects = self.state.objects
        N = self.state.trunc_degree
        if isinstance(stmt, FieldDecl):
            self.state.field = FieldSpec.parse(stmt.field)
        elif isinstance(stmt, RingDecl):
            F = self._field()
            if FieldSpec.parse(stmt.field) != F:
                raise FieldMismatch(f"ring {stmt.name} is over {stmt.field} but the session field is {F}")
            rels = [self.poly(r, stmt.vars) for r in stmt.relations]
            objects[stmt.name] = make_ring(F, stmt.vars, rels, N, name=stmt.name)
        elif isinstance(stmt, IdealDecl):
            ring = objects[stmt.ring]
            gens = [self.poly(g, ring.vars) for g in stmt.gens]
            objects[stmt.name] = make_ideal(ring, gens, stmt.name)
        elif isinstance(stmt, MapDecl):
            src, tgt = objects[stmt.source], objects[stmt.target]
            images = [self.poly(p, tgt.vars) for p in stmt.images]
            objects[stmt.name] = make_map(src, tgt, images, N, name=stmt.name)
        elif isinstance(stmt, QuotientDecl):
            Q, pi = quotient(objects[stmt.ring], objects[stmt.ideal])
            objects[stmt.name] = Q.named(stmt.name)
            if stmt.via:
                objects[stmt.via] = pi.named(stmt.via)
        elif isinstance(stmt, InducedDecl):
            objects[stmt.name] = induced_map(objects[stmt.map], objects[stmt.ideal]).named(stmt.name)
        elif isinstance(stmt, ComposeDecl):
            objects[stmt.name] = compose(objects[stmt.inner], objects[stmt.outer]).named(stmt.name)
        elif isinstance(stmt, DiagramDecl):
            kind = DiagramKind.TRIANGLE if stmt.kind == "triangle" else DiagramKind.SQUARE
            arrows = tuple(objects[a] for a in stmt.arrows)
            objects[stmt.name] = make_diagram(kind, arrows, Orientation(stmt.orientation), name=stmt.name)
        elif isinstance(stmt, SetOption):
            self.set_option(stmt)
        elif isinstance(stmt, ComputeQuery):
            self.entries.append(self.compute(stmt.invariant, stmt.args))
        elif isinstance(stmt, CheckQuery):
            entry = self.check(stmt.predicate, stmt.args)
            self.entries.append(entry)
            if entry.verdict is False:
                self.failures.append(f"{entry.query} {entry.subject}")
        else:
            raise SessionError(f"unsupported statement {type(stmt).__name__}")

    def set_option(self, stmt: SetOption) -> None:
        if stmt.option == "trunc_degree":
            value = stmt.args[0]
            if value < 2:
                raise SessionError(f"trunc_degree must be at least 2, got {value}", stmt.span)
            self.state.trunc_degree = value
        else:
            name, value = stmt.args
            self.state.objects[name] = self.state.objects[name].with_dim_override(value)

    # --- queries ---

    def compute(self, query: str, args) -> ReportEntry:
        obj = self._get(args[0])
        subject = " ".join(args)
        if query == "edim":
            return ReportEntry(query=query, subject=subject, value=edim(obj))
        if query in ("dim", "cdim"):
            value = krull_dim(obj) if query == "dim" else cdim(obj)
            return ReportEntry(query=query, subject=subject, value=value, caveats=[] if value is not None else ["unknown"])
        if query == "delta":
            return ReportEntry(query=query, subject=subject, value=delta(obj, self._get(args[1])))
        if query == "delta_phi":
            return ReportEntry(query=query, subject=subject, value=delta_phi(obj, self._get(args[1])))
        if query == "mu":
            return _stable_entry(query, subject, mu(obj))
        if query == "eps2":
            return _stable_entry(query, subject, eps2(obj))
        if query == "rd":
            return ReportEntry(query=query, subject=subject, value=rd(obj), caveats=[_degree_caveat(obj.verified_degree)])
        if query == "linearized":
            lm = linearized_map(obj)
            value = {
                "source_basis": list(lm.source_basis),
                "target_basis": list(lm.target_basis),
                "matrix": [[str(c) for c in row] for row in lm.matrix.rows],
                "rank": lm.rank,
                "nullity": lm.nullity,
            }
            return ReportEntry(query=query, subject=subject, value=value)
        if query == "fiber":
            F = closed_fiber(obj)
            return ReportEntry(query=query, subject=subject, value=str(F), caveats=[f"edim={edim(F)}"])
        if query == "flatness":
            status = flatness_status(obj)
            return ReportEntry(query=query, subject=subject, value=status.model_dump())
        if query == "triangle_rd":
            return ReportEntry(query=query, subject=subject, value=triangle_rd(obj), caveats=[_degree_caveat(obj.verified_degree)])
        if query == "square_rd":
            return ReportEntry(query=query, subject=subject, value=square_rd(obj), caveats=[_degree_caveat(obj.verified_degree)])
        if query == "base_change":
            ideal = self._get(args[1])
            changed = base_change_triangle(obj, ideal) if obj.kind is DiagramKind.TRIANGLE else base_change_square(obj, ideal)
            return ReportEntry(
                query=query,
                subject=subject,
                value=diagram_rd(changed),
                caveats=[_degree_caveat(changed.verified_degree)],
            )
        if query == "report":
            report = invariant_report(obj) if isinstance(obj, LocalRingPres) else map_report(obj)
            return ReportEntry(query=query, subject=subject, value=report.model_dump(exclude_none=True))
        raise SessionError(f"unknown compute query '{query}'")

    def check(self, predicate: str, args) -> ReportEntry:
        obj = self._get(args[0])
        subject = " ".join(args)
        caveats: List[str] = []
        if predicate == "basically_regular":
            verdict: Optional[bool] = is_basically_regular(obj)
            caveats.append(_degree_caveat(obj.verified_degree))
        elif predicate == "regular":
            verdict = is_regular(obj)
        elif predicate == "weakly_regular":
            verdict = is_weakly_regular(obj)
        elif predicate == "flat":
            status = flatness_status(obj)
            verdict = status.is_flat
            if status.witness:
                caveats.append(status.witness)
        elif predicate == "contained_in_m2":
            verdict = contained_in_m2(obj)
        elif predicate == "basic_diagram":
            verdict = is_basic_diagram(obj)
            caveats.append(_degree_caveat(obj.verified_degree))
        else:
            raise SessionError(f"unknown check '{predicate}'")
        if verdict is None:
            caveats.append("unknown")
        return ReportEntry(query=predicate, subject=subject, kind="check", verdict=verdict, caveats=caveats)


def execute(ast: SessionAst, options: Optional[SessionOptions] = None) -> Report:
    """Run every statement in order; the first error aborts with the statement's span."""
    runner = SessionRunner(options or SessionOptions())
    with recursion_headroom():
        report = runner.run(ast)
    logger.info("session: %d entries, %d failed checks", len(report.entries), len(report.failures))
    return report
