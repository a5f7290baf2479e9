# app/algebra/matrix.py
"""Dense matrices, exact row reduction, and sparse subspaces over a FieldSpec."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, NamedTuple, Sequence, Tuple

from app.algebra.field import FieldSpec, Scalar
from app.errors import RegDefectError

SparseVector = Dict[int, Scalar]


@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    rows: Tuple[Tuple[Scalar, ...], ...]
    ncols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise RegDefectError("matrix rows must all have ncols entries")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(field(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(field, rows, ncols)

    @classmethod
    def zero(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        return cls(field, tuple((field.zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(
            field,
            tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)),
            n,
        )

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def __mul__(self, other: "Matrix") -> "Matrix":
        self.field.require_same(other.field)
        if self.ncols != other.nrows:
            raise RegDefectError("matrix shapes do not compose")
        F = self.field
        out = []
        for row in self.rows:
            new_row = []
            for j in range(other.ncols):
                acc = F.zero
                for k, a in enumerate(row):
                    if a:
                        acc = F.add(acc, F.mul(a, other.rows[k][j]))
                new_row.append(acc)
            out.append(tuple(new_row))
        return Matrix(F, tuple(out), other.ncols)

    def __str__(self) -> str:
        if not self.rows:
            return f"[] (0x{self.ncols})"
        return "\n".join("[" + ", ".join(self.field.format(x) for x in row) + "]" for row in self.rows)


class RrefResult(NamedTuple):
    rank: int
    reduced: Matrix
    pivots: Tuple[int, ...]


def _integral_row(row: Sequence[Fraction]) -> List[int]:
    """Scale a rational row to a primitive integer row."""
    den = 1
    for x in row:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in row]
    content = 0
    for x in ints:
        content = gcd(content, x)
    return [x // content for x in ints] if content > 1 else ints


def _primitive(row: List[int]) -> List[int]:
    content = 0
    for x in row:
        content = gcd(content, x)
    return [x // content for x in row] if content > 1 else row


def rref(m: Matrix) -> RrefResult:
    """Reduced row echelon form. Rational input is cleared of denominators and eliminated fraction-free."""
    F = m.field
    ncols = m.ncols
    pivots: List[int] = []
    if F.is_rational:
        rows = [_integral_row(row) for row in m.rows]
        r = 0
        for c in range(ncols):
            pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            a = rows[r][c]
            for i in range(len(rows)):
                if i != r and rows[i][c] != 0:
                    b = rows[i][c]
                    rows[i] = _primitive([a * x - b * y for x, y in zip(rows[i], rows[r])])
            pivots.append(c)
            r += 1
        reduced = []
        for i, row in enumerate(rows):
            if i < len(pivots):
                lead = row[pivots[i]]
                reduced.append(tuple(Fraction(x, lead) for x in row))
            else:
                reduced.append(tuple(Fraction(0) for _ in row))
    else:
        rows = [list(row) for row in m.rows]
        r = 0
        for c in range(ncols):
            pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            inv = F.inv(rows[r][c])
            rows[r] = [F.mul(inv, x) for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c] != 0:
                    b = rows[i][c]
                    rows[i] = [F.sub(x, F.mul(b, y)) for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        reduced = [tuple(row) for row in rows]
    return RrefResult(len(pivots), Matrix(F, tuple(reduced), ncols), tuple(pivots))


def rank(m: Matrix) -> int:
    return rref(m).rank


def kernel_dim(m: Matrix) -> int:
    """Nullity: ncols - rank."""
    return m.ncols - rref(m).rank


# --- sparse subspaces ---

def dense_to_sparse(vec: Sequence[Scalar]) -> SparseVector:
    return {i: x for i, x in enumerate(vec) if x != 0}


def sparse_to_dense(field: FieldSpec, vec: Mapping[int, Scalar], dim: int) -> Tuple[Scalar, ...]:
    return tuple(vec.get(i, field.zero) for i in range(dim))


def _axpy(field: FieldSpec, target: SparseVector, coef: Scalar, row: Mapping[int, Scalar]) -> None:
    """target -= coef * row, in place."""
    p = field.p
    for k, x in row.items():
        value = target.get(k, 0) - coef * x
        if p:
            value %= p
        if value:
            target[k] = value
        else:
            target.pop(k, None)


class SpanBuilder:
    """Incremental Gauss-Jordan elimination on sparse vectors; rows stay fully reduced."""

    def __init__(self, field: FieldSpec, ambient_dim: int):
        self.field = field
        self.ambient_dim = ambient_dim
        self._rows: Dict[int, SparseVector] = {}

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Mapping[int, Scalar]) -> SparseVector:
        out = dict(vec)
        # rows are zero at every other pivot, so one pass over the initial pivot hits suffices
        for c in [k for k in out if k in self._rows]:
            coef = out.get(c)
            if coef:
                _axpy(self.field, out, coef, self._rows[c])
        return out

    def add(self, vec: Mapping[int, Scalar]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        F = self.field
        pivot = min(v)
        inv = F.inv(v[pivot])
        v = {k: F.mul(inv, x) for k, x in v.items()}
        for row in self._rows.values():
            coef = row.get(pivot)
            if coef:
                _axpy(F, row, coef, v)
        self._rows[pivot] = v
        return True

    def extend(self, vectors: Iterable[Mapping[int, Scalar]]) -> int:
        return sum(1 for v in vectors if self.add(v))

    def freeze(self) -> "Subspace":
        return Subspace(self.field, self.ambient_dim, {c: dict(r) for c, r in self._rows.items()})


class Subspace:
    """A subspace of K^ambient_dim stored as sparse RREF rows keyed by pivot column."""

    __slots__ = ("field", "ambient_dim", "_rows")

    def __init__(self, field: FieldSpec, ambient_dim: int, rows: Dict[int, SparseVector]):
        self.field = field
        self.ambient_dim = ambient_dim
        self._rows = rows

    @classmethod
    def span(cls, field: FieldSpec, ambient_dim: int, vectors: Iterable) -> "Subspace":
        builder = SpanBuilder(field, ambient_dim)
        for v in vectors:
            builder.add(v if isinstance(v, Mapping) else dense_to_sparse(v))
        return builder.freeze()

    @classmethod
    def zero(cls, field: FieldSpec, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, {})

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(sorted(self._rows))

    def builder(self) -> SpanBuilder:
        b = SpanBuilder(self.field, self.ambient_dim)
        b._rows = {c: dict(r) for c, r in self._rows.items()}
        return b

    def reduce(self, vec) -> SparseVector:
        if not isinstance(vec, Mapping):
            vec = dense_to_sparse(vec)
        out = dict(vec)
        for c in [k for k in out if k in self._rows]:
            coef = out.get(c)
            if coef:
                _axpy(self.field, out, coef, self._rows[c])
        return out

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def join(self, other: "Subspace") -> "Subspace":
        b = self.builder()
        for row in other._rows.values():
            b.add(row)
        return b.freeze()

    def vectors(self) -> List[SparseVector]:
        """The reduced basis rows, in pivot order."""
        return [dict(self._rows[c]) for c in self.pivots]

    def basis_matrix(self) -> Matrix:
        rows = [sparse_to_dense(self.field, self._rows[c], self.ambient_dim) for c in self.pivots]
        return Matrix(self.field, tuple(rows), self.ambient_dim)

    def complement_indices(self) -> Tuple[int, ...]:
        """Standard basis indices that are not pivots; their classes form a basis of the quotient."""
        return tuple(i for i in range(self.ambient_dim) if i not in self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self._rows == other._rows
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.pivots))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"
