# app/algebra/field.py
"""Exact coefficient fields: the rationals and prime fields."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import isprime

from app.errors import FieldMismatch, RegDefectError

Scalar = Union[int, Fraction]

_GF_PATTERN = re.compile(r"^\s*GF\(\s*(\d+)\s*\)\s*$")


@dataclass(frozen=True)
class FieldSpec:
    """Either QQ (``p == 0``) or GF(p). Elements are ``Fraction`` resp. ``int`` in ``[0, p)``."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not isprime(self.p):
            raise RegDefectError(f"GF({self.p}) is not a field: {self.p} is not prime")

    # --- construction ---

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        if text.strip() == "QQ":
            return cls.rationals()
        m = _GF_PATTERN.match(text)
        if not m:
            raise RegDefectError(f"unknown field '{text}' (use QQ or GF(p))")
        return cls.prime(int(m.group(1)))

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def kind(self) -> str:
        return "Rationals" if self.p == 0 else "PrimeField"

    def __str__(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    # --- arithmetic ---

    def __call__(self, value) -> Scalar:
        """Coerce an int or Fraction into a canonical element."""
        if self.p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.p == 0 else (a * b) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.p == 0 else pow(a, -1, self.p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def require_same(self, other: "FieldSpec") -> None:
        if self != other:
            raise FieldMismatch(f"field mismatch: {self} vs {other}")

    def format(self, a: Scalar) -> str:
        if self.p == 0 and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return str(int(a))

    def random_element(self, rng, nonzero: bool = False, bound: int = 3) -> Scalar:
        """Small elements for desk-scale generation: integers in [-bound, bound] over QQ."""
        while True:
            if self.p == 0:
                value = self(rng.randint(-bound, bound))
            else:
                value = self(rng.randrange(self.p))
            if not nonzero or value != 0:
                return value


QQ = FieldSpec.rationals()


def GF(p: int) -> FieldSpec:
    return FieldSpec.prime(p)
