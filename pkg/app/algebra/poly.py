# app/algebra/poly.py
"""Sparse multivariate polynomials with exact coefficients."""
from __future__ import annotations

from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from app.algebra.field import FieldSpec, Scalar
from app.errors import ArityMismatch, NonzeroConstantTerm, VariableMismatch

Monomial = Tuple[int, ...]


def monomial_degree(m: Monomial) -> int:
    return sum(m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def grlex_key(m: Monomial):
    """Ascending graded order; within a degree, x0 before x1 before ..."""
    return (sum(m), tuple(-e for e in m))


def unit_monomial(n: int, i: int) -> Monomial:
    return tuple(1 if j == i else 0 for j in range(n))


def monomials_below(n: int, degree: int) -> Tuple[Monomial, ...]:
    """All monomials in n variables of total degree < degree, in grlex_key order."""
    out = []
    for d in range(degree):
        out.extend(monomials_of_degree(n, d))
    return tuple(out)


def monomials_of_degree(n: int, d: int) -> Tuple[Monomial, ...]:
    if n == 0:
        return ((),) if d == 0 else ()
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, n)
    return tuple(out)


class Poly:
    """An immutable polynomial over ``field`` in the ordered variables ``vars``."""

    __slots__ = ("field", "vars", "_terms", "_hash")

    def __init__(self, field: FieldSpec, vars: Sequence[str], terms: Mapping[Monomial, Scalar] = None):
        self.field = field
        self.vars = tuple(vars)
        clean: Dict[Monomial, Scalar] = {}
        for mono, coef in (terms or {}).items():
            if len(mono) != len(self.vars):
                raise VariableMismatch(f"monomial {mono} does not match variables {self.vars}")
            c = field(coef)
            if c != 0:
                clean[tuple(mono)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, field, vars, terms) -> "Poly":
        p = cls.__new__(cls)
        p.field = field
        p.vars = vars
        p._terms = terms
        p._hash = None
        return p

    # --- constructors ---

    @classmethod
    def zero(cls, field: FieldSpec, vars: Sequence[str]) -> "Poly":
        return cls(field, vars)

    @classmethod
    def const(cls, field: FieldSpec, vars: Sequence[str], value) -> "Poly":
        return cls(field, vars, {(0,) * len(vars): value})

    @classmethod
    def var(cls, field: FieldSpec, vars: Sequence[str], i: int) -> "Poly":
        return cls(field, vars, {unit_monomial(len(vars), i): 1})

    @classmethod
    def monomial(cls, field: FieldSpec, vars: Sequence[str], mono: Monomial, coef=1) -> "Poly":
        return cls(field, vars, {tuple(mono): coef})

    # --- inspection ---

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Scalar]]:
        return iter(sorted(self._terms.items(), key=lambda t: grlex_key(t[0])))

    def coefficient(self, mono: Monomial) -> Scalar:
        return self._terms.get(tuple(mono), self.field.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def constant_term(self) -> Scalar:
        return self.coefficient((0,) * self.nvars)

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a nonzero term; -1 for the zero polynomial."""
        return min((sum(m) for m in self._terms), default=-1)

    def support(self) -> Tuple[int, ...]:
        """Indices of variables occurring in the polynomial."""
        return tuple(i for i in range(self.nvars) if any(m[i] for m in self._terms))

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.field, self.vars, {m: c for m, c in self._terms.items() if sum(m) == d})

    def truncate(self, degree: int) -> "Poly":
        """Drop every term of total degree >= degree."""
        return Poly._raw(self.field, self.vars, {m: c for m, c in self._terms.items() if sum(m) < degree})

    def require_local(self, where: str = "") -> None:
        if self.constant_term != 0:
            raise NonzeroConstantTerm(self, where)

    # --- arithmetic ---

    def _check(self, other: "Poly") -> None:
        self.field.require_same(other.field)
        if self.vars != other.vars:
            raise VariableMismatch(f"variables differ: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.field, self.vars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        F = self.field
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = F.add(out.get(m, F.zero), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(F, self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly._raw(F, self.vars, {m: F.neg(c) for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        F = self.field
        c = F(c)
        if c == 0:
            return Poly.zero(F, self.vars)
        return Poly._raw(F, self.vars, {m: F.mul(c, x) for m, x in self._terms.items()})

    def mul(self, other: "Poly", below: int | None = None) -> "Poly":
        """Product; with ``below`` set, terms of total degree >= below are discarded."""
        self._check(other)
        F = self.field
        out: Dict[Monomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            d1 = sum(m1)
            for m2, c2 in other._terms.items():
                if below is not None and d1 + sum(m2) >= below:
                    continue
                m = monomial_mul(m1, m2)
                v = F.add(out.get(m, F.zero), F.mul(c1, c2))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly._raw(F, self.vars, out)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def pow(self, e: int, below: int | None = None) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.const(self.field, self.vars, 1)
        base = self
        while e:
            if e & 1:
                result = result.mul(base, below)
            e >>= 1
            if e:
                base = base.mul(base, below)
        return result

    def __pow__(self, e: int) -> "Poly":
        return self.pow(e)

    def substitute(
        self, images: Sequence["Poly"], below: int | None = None, target_vars: Sequence[str] | None = None
    ) -> "Poly":
        """Replace variable i by images[i]; images share a common ambient ring."""
        if len(images) != self.nvars:
            raise ArityMismatch(self.nvars, len(images))
        if target_vars is None:
            if not images:
                raise VariableMismatch("substituting into a constant needs explicit target variables")
            target_vars = images[0].vars
        target_vars = tuple(target_vars)
        F = self.field
        result = Poly.zero(F, target_vars)
        cache: Dict[Tuple[int, int], Poly] = {}
        for mono, coef in self._terms.items():
            term = Poly.const(F, target_vars, coef)
            for i, e in enumerate(mono):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i].pow(e, below)
                    term = term.mul(cache[key], below)
            result = result + term
        return result

    def rename(self, vars: Sequence[str]) -> "Poly":
        if len(vars) != self.nvars:
            raise VariableMismatch("rename must keep the number of variables")
        return Poly._raw(self.field, tuple(vars), dict(self._terms))

    def embed(self, vars: Sequence[str]) -> "Poly":
        """Re-express over a variable list containing every variable of this polynomial."""
        vars = tuple(vars)
        index = {v: i for i, v in enumerate(vars)}
        missing = [v for v in self.vars if v not in index]
        if missing:
            raise VariableMismatch(f"variables {missing} not in {vars}")
        out = {}
        for m, c in self._terms.items():
            new = [0] * len(vars)
            for i, e in enumerate(m):
                new[index[self.vars[i]]] += e
            out[tuple(new)] = c
        return Poly._raw(self.field, vars, out)

    # --- protocol ---

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.field == other.field and self.vars == other.vars and self._terms == other._terms
        if isinstance(other, int):
            return self == Poly.const(self.field, self.vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.vars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        F = self.field
        pieces = []
        # print highest degree first
        for mono, coef in sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0]))):
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(self.vars[i])
                elif e > 1:
                    factors.append(f"{self.vars[i]}^{e}")
            negative = F.is_rational and coef < 0
            magnitude = -coef if negative else coef
            text = F.format(magnitude)
            if factors:
                body = "*".join(factors) if text == "1" else f"{text}*" + "*".join(factors)
            else:
                body = text
            pieces.append(("-" if negative else "+", body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self}, vars={list(self.vars)}, field={self.field})"


def linear_part(p: Poly) -> Tuple[Scalar, ...]:
    """Coefficient vector of the degree-one terms; p must vanish at the origin."""
    p.require_local("linear_part")
    n = p.nvars
    return tuple(p.coefficient(unit_monomial(n, i)) for i in range(n))

