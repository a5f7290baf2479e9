# frontend/components/parser.py
"""
Lexer, parser and printer for session files (``.lrh``).

A session is a list of ``;``-terminated statements: one field declaration,
then ring, ideal and map declarations, derived objects (quotients, induced
maps, composites, diagrams), options and queries. Names are checked for
declaration before use while parsing; the algebra happens in ``session``.
"""
from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.errors import RegDefectError, Redeclaration, SessionSyntaxError, UndeclaredName
from app.algebra.field import FieldSpec

MAX_DEPTH = 200
MAX_TERMS = 1000
MAX_INT_DIGITS = 1000
RECURSION_HEADROOM = 10_000

KEYWORDS = frozenset(
    {
        "field", "ring", "local", "ideal", "map", "in", "quotient", "via", "induced", "mod",
        "compose", "after", "diagram", "triangle", "square", "clockwise", "anticlockwise",
        "compute", "check", "set", "QQ", "GF",
    }
)

# query name -> accepted argument kinds, one tuple per argument
COMPUTE_QUERIES: Dict[str, Tuple[Tuple[str, ...], ...]] = {
    "edim": (("ring",),),
    "dim": (("ring",),),
    "cdim": (("ring",),),
    "delta": (("ring",), ("ideal",)),
    "delta_phi": (("map",), ("ideal",)),
    "mu": (("ideal", "ring"),),
    "eps2": (("ring",),),
    "rd": (("map",),),
    "linearized": (("map",),),
    "fiber": (("map",),),
    "flatness": (("map",),),
    "triangle_rd": (("triangle",),),
    "square_rd": (("square",),),
    "base_change": (("triangle", "square"), ("ideal",)),
    "report": (("ring", "map"),),
}

CHECK_QUERIES: Dict[str, Tuple[Tuple[str, ...], ...]] = {
    "basically_regular": (("map",),),
    "regular": (("ring",),),
    "weakly_regular": (("map",),),
    "flat": (("map",),),
    "contained_in_m2": (("ideal",),),
    "basic_diagram": (("triangle", "square"),),
}


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets into the session text, with the 1-based line and column of ``start``."""

    start: int
    end: int
    line: int
    column: int


def _span_field():
    return field(default=None, compare=False, repr=False)


# --- polynomial expressions ---

@dataclass(frozen=True)
class Num:
    value: int
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class Var:
    name: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    span: Optional[SourceSpan] = _span_field()


Expr = Union[Num, Var, Neg, BinOp, Pow]


# --- statements ---

@dataclass(frozen=True)
class FieldDecl:
    field: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class RingDecl:
    name: str
    field: str
    vars: Tuple[str, ...]
    relations: Tuple[Expr, ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class IdealDecl:
    name: str
    gens: Tuple[Expr, ...]
    ring: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: Tuple[Expr, ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class QuotientDecl:
    name: str
    ring: str
    ideal: str
    via: Optional[str] = None
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class InducedDecl:
    name: str
    map: str
    ideal: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class ComposeDecl:
    name: str
    outer: str
    inner: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class DiagramDecl:
    name: str
    kind: str  # triangle | square
    arrows: Tuple[str, ...]
    orientation: str = "clockwise"
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class ComputeQuery:
    invariant: str
    args: Tuple[str, ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class CheckQuery:
    predicate: str
    args: Tuple[str, ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class SetOption:
    option: str  # trunc_degree | dim_override
    args: Tuple[Union[str, int], ...]
    span: Optional[SourceSpan] = _span_field()


Statement = Union[
    FieldDecl, RingDecl, IdealDecl, MapDecl, QuotientDecl, InducedDecl,
    ComposeDecl, DiagramDecl, ComputeQuery, CheckQuery, SetOption,
]


@dataclass(frozen=True)
class SessionAst:
    statements: Tuple[Statement, ...]

    def __len__(self) -> int:
        return len(self.statements)


# --- lexer ---

@dataclass(frozen=True)
class Token:
    kind: str  # IDENT INT PUNCT EOF
    text: str
    span: SourceSpan


_PUNCT = ("->", ";", "=", "[", "]", "(", ")", ",", "/", ":", "+", "-", "*", "^")


class Lexer:
    """Turns session text into tokens; ``#`` comments run to the end of the line."""

    def __init__(self, text: str):
        self.text = text
        # byte offset of every character position
        self._bytes = [0]
        for ch in text:
            self._bytes.append(self._bytes[-1] + len(ch.encode("utf-8")))
        self.pos = 0
        self.line = 1
        self.col = 1

    def _span(self, start: int, line: int, col: int) -> SourceSpan:
        return SourceSpan(self._bytes[start], self._bytes[self.pos], line, col)

    def _advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def tokens(self) -> List[Token]:
        out: List[Token] = []
        text = self.text
        while True:
            while self.pos < len(text) and (text[self.pos].isspace() or text[self.pos] == "#"):
                if text[self.pos] == "#":
                    while self.pos < len(text) and text[self.pos] != "\n":
                        self._advance()
                else:
                    self._advance()
            start, line, col = self.pos, self.line, self.col
            if self.pos >= len(text):
                out.append(Token("EOF", "", self._span(start, line, col)))
                return out
            ch = text[self.pos]
            if ch.isascii() and (ch.isalpha() or ch == "_"):
                while self.pos < len(text) and text[self.pos].isascii() and (text[self.pos].isalnum() or text[self.pos] == "_"):
                    self._advance()
                out.append(Token("IDENT", text[start:self.pos], self._span(start, line, col)))
            elif ch.isascii() and ch.isdigit():
                while self.pos < len(text) and text[self.pos].isascii() and text[self.pos].isdigit():
                    self._advance()
                if self.pos - start > MAX_INT_DIGITS:
                    raise SessionSyntaxError("integer literal too long", self._span(start, line, col))
                out.append(Token("INT", text[start:self.pos], self._span(start, line, col)))
            else:
                for p in _PUNCT:
                    if text.startswith(p, self.pos):
                        self._advance(len(p))
                        out.append(Token("PUNCT", p, self._span(start, line, col)))
                        break
                else:
                    self._advance()
                    raise SessionSyntaxError(f"unexpected character {ch!r}", self._span(start, line, col))


def _decode(data: Union[str, bytes]) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        prefix = data[: e.start]
        line = prefix.count(b"\n") + 1
        column = e.start - (prefix.rfind(b"\n") + 1) + 1
        raise SessionSyntaxError("invalid UTF-8", SourceSpan(e.start, e.end, line, column)) from None


# --- parser ---

class Parser:
    """Recursive descent over the token list, with a symbol table of declared names."""

    def __init__(self, text: str):
        self.tokens = Lexer(text).tokens()
        self.i = 0
        self.depth = 0
        self.operators = 0
        self.field_declared = False
        self.kinds: Dict[str, str] = {}
        self.ring_vars: Dict[str, Tuple[str, ...]] = {}

    # --- token helpers ---

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def _error(self, message: str, expected: Sequence[str] = ()) -> SessionSyntaxError:
        return SessionSyntaxError(message, self.tok.span, expected)

    def _unexpected(self, expected: Sequence[str]) -> SessionSyntaxError:
        shown = "end of input" if self.tok.kind == "EOF" else repr(self.tok.text)
        return self._error(f"unexpected {shown}", expected)

    def _at(self, text: str) -> bool:
        return self.tok.kind in ("PUNCT", "IDENT") and self.tok.text == text

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise self._unexpected([text])
        return self._next()

    def _ident(self, what: str = "name") -> Token:
        if self.tok.kind != "IDENT" or self.tok.text in KEYWORDS:
            raise self._unexpected([what])
        return self._next()

    def _int(self) -> Token:
        if self.tok.kind != "INT":
            raise self._unexpected(["integer"])
        return self._next()

    def _stmt_span(self, first: Token) -> SourceSpan:
        last = self.tokens[self.i - 1]
        return SourceSpan(first.span.start, last.span.end, first.span.line, first.span.column)

    # --- symbols ---

    def _declare(self, tok: Token, kind: str) -> None:
        if tok.text in self.kinds:
            raise Redeclaration(tok.text, tok.span)
        self.kinds[tok.text] = kind

    def _use(self, tok: Token, kinds: Sequence[str]) -> str:
        kind = self.kinds.get(tok.text)
        if kind is None:
            raise UndeclaredName(tok.text, tok.span, "/".join(kinds))
        if kind not in kinds:
            raise SessionSyntaxError(f"'{tok.text}' is a {kind}", tok.span, kinds)
        return kind

    def _check_vars(self, exprs: Sequence[Expr], vars: Tuple[str, ...]) -> None:
        for e in exprs:
            for v in _variables(e):
                if v.name not in vars:
                    raise UndeclaredName(v.name, v.span, "variable")

    # --- session ---

    def parse(self) -> SessionAst:
        statements: List[Statement] = []
        while self.tok.kind != "EOF":
            statements.append(self.statement())
        return SessionAst(tuple(statements))

    def statement(self) -> Statement:
        head = self.tok
        handlers = {
            "field": self.field_decl,
            "ring": self.ring_decl,
            "ideal": self.ideal_decl,
            "map": self.map_decl,
            "quotient": self.quotient_decl,
            "induced": self.induced_decl,
            "compose": self.compose_decl,
            "diagram": self.diagram_decl,
            "compute": self.compute_query,
            "check": self.check_query,
            "set": self.set_option,
        }
        if head.kind != "IDENT" or head.text not in handlers:
            raise self._unexpected(sorted(handlers))
        self._next()
        node = handlers[head.text](head)
        self._expect(";")
        return node

    def _field_name(self) -> str:
        if self._at("QQ"):
            self._next()
            return "QQ"
        if self._at("GF"):
            start = self._next()
            self._expect("(")
            p = self._int()
            self._expect(")")
            text = f"GF({int(p.text)})"
            try:
                FieldSpec.parse(text)
            except RegDefectError as e:
                raise SessionSyntaxError(str(e), self._stmt_span(start)) from None
            return text
        raise self._unexpected(["QQ", "GF"])

    def field_decl(self, head: Token) -> FieldDecl:
        if self.field_declared:
            raise Redeclaration("field", head.span)
        name = self._field_name()
        self.field_declared = True
        return FieldDecl(name, self._stmt_span(head))

    def ring_decl(self, head: Token) -> RingDecl:
        if not self.field_declared:
            raise UndeclaredName("field", head.span, "field declaration")
        name = self._ident("ring name")
        self._expect("=")
        self._expect("local")
        fname = self._field_name()
        self._expect("[")
        vars: List[str] = []
        if not self._at("]"):
            vars.append(self._ident("variable").text)
            while self._at(","):
                self._next()
                vars.append(self._ident("variable").text)
        self._expect("]")
        relations: Tuple[Expr, ...] = ()
        if self._at("/"):
            self._next()
            self._expect("(")
            relations = self.expr_list(")")
            self._expect(")")
        self._check_vars(relations, tuple(vars))
        self._declare(name, "ring")
        self.ring_vars[name.text] = tuple(vars)
        return RingDecl(name.text, fname, tuple(vars), relations, self._stmt_span(head))

    def ideal_decl(self, head: Token) -> IdealDecl:
        name = self._ident("ideal name")
        self._expect("=")
        self._expect("(")
        gens = self.expr_list(")")
        self._expect(")")
        self._expect("in")
        ring = self._ident("ring name")
        self._use(ring, ("ring",))
        self._check_vars(gens, self.ring_vars[ring.text])
        self._declare(name, "ideal")
        return IdealDecl(name.text, gens, ring.text, self._stmt_span(head))

    def map_decl(self, head: Token) -> MapDecl:
        name = self._ident("map name")
        self._expect(":")
        src = self._ident("ring name")
        self._use(src, ("ring",))
        self._expect("->")
        tgt = self._ident("ring name")
        self._use(tgt, ("ring",))
        self._expect("=")
        self._expect("[")
        images = self.expr_list("]")
        self._expect("]")
        self._check_vars(images, self.ring_vars[tgt.text])
        self._declare(name, "map")
        return MapDecl(name.text, src.text, tgt.text, images, self._stmt_span(head))

    def quotient_decl(self, head: Token) -> QuotientDecl:
        name = self._ident("ring name")
        self._expect("=")
        ring = self._ident("ring name")
        self._use(ring, ("ring",))
        self._expect("/")
        ideal = self._ident("ideal name")
        self._use(ideal, ("ideal",))
        via = None
        if self._at("via"):
            self._next()
            via = self._ident("map name")
        self._declare(name, "ring")
        self.ring_vars[name.text] = self.ring_vars[ring.text]
        if via is not None:
            self._declare(via, "map")
        return QuotientDecl(name.text, ring.text, ideal.text, via.text if via else None, self._stmt_span(head))

    def induced_decl(self, head: Token) -> InducedDecl:
        name = self._ident("map name")
        self._expect("=")
        f = self._ident("map name")
        self._use(f, ("map",))
        self._expect("mod")
        ideal = self._ident("ideal name")
        self._use(ideal, ("ideal",))
        self._declare(name, "map")
        return InducedDecl(name.text, f.text, ideal.text, self._stmt_span(head))

    def compose_decl(self, head: Token) -> ComposeDecl:
        name = self._ident("map name")
        self._expect("=")
        outer = self._ident("map name")
        self._use(outer, ("map",))
        self._expect("after")
        inner = self._ident("map name")
        self._use(inner, ("map",))
        self._declare(name, "map")
        return ComposeDecl(name.text, outer.text, inner.text, self._stmt_span(head))

    def diagram_decl(self, head: Token) -> DiagramDecl:
        name = self._ident("diagram name")
        self._expect("=")
        if not (self._at("triangle") or self._at("square")):
            raise self._unexpected(["triangle", "square"])
        kind = self._next().text
        self._expect("(")
        arrows = [self._ident("map name")]
        while self._at(","):
            self._next()
            arrows.append(self._ident("map name"))
        self._expect(")")
        wanted = 2 if kind == "triangle" else 4
        if len(arrows) != wanted:
            raise SessionSyntaxError(f"a {kind} takes {wanted} arrows, got {len(arrows)}", arrows[-1].span)
        for a in arrows:
            self._use(a, ("map",))
        orientation = "clockwise"
        if self._at("clockwise") or self._at("anticlockwise"):
            orientation = self._next().text
        self._declare(name, kind)
        return DiagramDecl(name.text, kind, tuple(a.text for a in arrows), orientation, self._stmt_span(head))

    def _query_args(self, signature: Tuple[Tuple[str, ...], ...]) -> Tuple[str, ...]:
        args = []
        for kinds in signature:
            tok = self._ident("/".join(kinds))
            self._use(tok, kinds)
            args.append(tok.text)
        return tuple(args)

    def compute_query(self, head: Token) -> ComputeQuery:
        if self.tok.kind != "IDENT" or self.tok.text not in COMPUTE_QUERIES:
            raise self._unexpected(sorted(COMPUTE_QUERIES))
        name = self._next().text
        args = self._query_args(COMPUTE_QUERIES[name])
        return ComputeQuery(name, args, self._stmt_span(head))

    def check_query(self, head: Token) -> CheckQuery:
        if self.tok.kind != "IDENT" or self.tok.text not in CHECK_QUERIES:
            raise self._unexpected(sorted(CHECK_QUERIES))
        name = self._next().text
        args = self._query_args(CHECK_QUERIES[name])
        return CheckQuery(name, args, self._stmt_span(head))

    def set_option(self, head: Token) -> SetOption:
        if self._at("trunc_degree"):
            self._next()
            value = int(self._int().text)
            return SetOption("trunc_degree", (value,), self._stmt_span(head))
        if self._at("dim_override"):
            self._next()
            ring = self._ident("ring name")
            self._use(ring, ("ring",))
            value = int(self._int().text)
            return SetOption("dim_override", (ring.text, value), self._stmt_span(head))
        raise self._unexpected(["trunc_degree", "dim_override"])

    # --- polynomial expressions ---

    def expr_list(self, closer: str) -> Tuple[Expr, ...]:
        self.operators = 0
        if self._at(closer):
            return ()
        items = [self.expr()]
        while self._at(","):
            self._next()
            self.operators = 0
            items.append(self.expr())
        return tuple(items)

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self._error(f"expression nested deeper than {MAX_DEPTH}")

    def _count_operator(self) -> None:
        self.operators += 1
        if self.operators > MAX_TERMS:
            raise self._error(f"more than {MAX_TERMS} operators in one expression")

    def expr(self) -> Expr:
        self._enter()
        first = self.tok
        node = self.term()
        while self._at("+") or self._at("-"):
            self._count_operator()
            op = self._next().text
            node = BinOp(op, node, self.term(), self._stmt_span(first))
        self.depth -= 1
        return node

    def term(self) -> Expr:
        first = self.tok
        node = self.unary()
        while self._at("*") or self._at("/"):
            self._count_operator()
            op = self._next().text
            if op == "/":
                right: Expr = Num(int(self._int().text), self.tokens[self.i - 1].span)
            else:
                right = self.unary()
            node = BinOp(op, node, right, self._stmt_span(first))
        return node

    def unary(self) -> Expr:
        if self._at("-"):
            first = self._next()
            self._enter()
            operand = self.unary()
            self.depth -= 1
            return Neg(operand, self._stmt_span(first))
        return self.power()

    def power(self) -> Expr:
        first = self.tok
        base = self.atom()
        if self._at("^"):
            self._next()
            exponent = int(self._int().text)
            return Pow(base, exponent, self._stmt_span(first))
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "INT":
            self._next()
            return Num(int(tok.text), tok.span)
        if tok.kind == "IDENT" and tok.text not in KEYWORDS:
            self._next()
            return Var(tok.text, tok.span)
        if self._at("("):
            self._next()
            inner = self.expr()
            self._expect(")")
            return inner
        raise self._unexpected(["integer", "variable", "("])


def _variables(e: Expr) -> List[Var]:
    if isinstance(e, Var):
        return [e]
    if isinstance(e, Neg):
        return _variables(e.operand)
    if isinstance(e, Pow):
        return _variables(e.base)
    if isinstance(e, BinOp):
        return _variables(e.left) + _variables(e.right)
    return []


@contextmanager
def recursion_headroom(limit: int = RECURSION_HEADROOM):
    """Raise the recursion limit to at least ``limit`` inside the block and restore it on exit."""
    previous = sys.getrecursionlimit()
    if previous < limit:
        # operator chains nest left, and every walk over the tree recurses along them
        sys.setrecursionlimit(limit)
    try:
        yield
    finally:
        sys.setrecursionlimit(previous)


def parse_session(data: Union[str, bytes]) -> SessionAst:
    """Parse session text (str, or UTF-8 bytes) into a SessionAst."""
    with recursion_headroom():
        return Parser(_decode(data)).parse()


# --- printer ---

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def print_expr(e: Expr) -> str:
    with recursion_headroom():
        return _print_expr(e)


def _print_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = _print_expr(e.operand)
        return f"-({inner})" if _prec(e.operand) < 3 else f"-{inner}"
    if isinstance(e, Pow):
        base = _print_expr(e.base)
        return f"({base})^{e.exponent}" if _prec(e.base) < 5 else f"{base}^{e.exponent}"
    p = _PREC[e.op]
    left = _print_expr(e.left)
    right = _print_expr(e.right)
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    sep = f" {e.op} " if p == 1 else e.op
    return f"{left}{sep}{right}"


def _exprs(items: Sequence[Expr]) -> str:
    return ", ".join(_print_expr(e) for e in items)


def print_statement(s: Statement) -> str:
    if isinstance(s, FieldDecl):
        return f"field {s.field};"
    if isinstance(s, RingDecl):
        rels = f"/({_exprs(s.relations)})" if s.relations else ""
        return f"ring {s.name} = local {s.field}[{','.join(s.vars)}]{rels};"
    if isinstance(s, IdealDecl):
        return f"ideal {s.name} = ({_exprs(s.gens)}) in {s.ring};"
    if isinstance(s, MapDecl):
        return f"map {s.name} : {s.source} -> {s.target} = [{_exprs(s.images)}];"
    if isinstance(s, QuotientDecl):
        via = f" via {s.via}" if s.via else ""
        return f"quotient {s.name} = {s.ring} / {s.ideal}{via};"
    if isinstance(s, InducedDecl):
        return f"induced {s.name} = {s.map} mod {s.ideal};"
    if isinstance(s, ComposeDecl):
        return f"compose {s.name} = {s.outer} after {s.inner};"
    if isinstance(s, DiagramDecl):
        return f"diagram {s.name} = {s.kind}({', '.join(s.arrows)}) {s.orientation};"
    if isinstance(s, ComputeQuery):
        return f"compute {' '.join((s.invariant,) + s.args)};"
    if isinstance(s, CheckQuery):
        return f"check {' '.join((s.predicate,) + s.args)};"
    if isinstance(s, SetOption):
        return f"set {s.option} {' '.join(str(a) for a in s.args)};"
    raise TypeError(f"not a session statement: {s!r}")


def print_session(ast: SessionAst) -> str:
    with recursion_headroom():
        return "\n".join(print_statement(s) for s in ast.statements) + "\n"
