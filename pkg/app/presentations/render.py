# app/presentations/render.py
"""Render presentations as session declarations, so any instance can be replayed with ``run``."""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from app.algebra.field import FieldSpec
from app.presentations.maps import LocalMapPres
from app.presentations.ring import IdealPres, LocalRingPres


def _ring_key(ring: LocalRingPres):
    return (ring.field, ring.vars, frozenset(ring.relations), ring.dim_override)


class SessionWriter:
    """Collects rings, ideals and maps, naming each once, and emits session text."""

    def __init__(self, field: FieldSpec, trunc_degree: Optional[int] = None):
        self.field = field
        self.trunc_degree = trunc_degree
        self._lines: List[str] = []
        self._rings: Dict[tuple, str] = {}
        self._ideals: Dict[Tuple[str, frozenset], str] = {}
        self._used: set = set()

    def _fresh(self, hint: str, default: str) -> str:
        base = hint if hint and hint.isidentifier() else default
        name, k = base, 1
        while name in self._used:
            k += 1
            name = f"{base}{k}"
        self._used.add(name)
        return name

    def ring(self, ring: LocalRingPres, hint: str = "") -> str:
        key = _ring_key(ring)
        if key in self._rings:
            return self._rings[key]
        name = self._fresh(hint, "R")
        self._rings[key] = name
        body = f"ring {name} = local {ring.field}[{','.join(ring.vars)}]"
        if ring.relations:
            body += "/(" + ", ".join(str(r) for r in ring.relations) + ")"
        self._lines.append(body + ";")
        if ring.dim_override is not None:
            self._lines.append(f"set dim_override {name} {ring.dim_override};")
        return name

    def ideal(self, ideal: IdealPres, hint: str = "") -> str:
        ring_name = self.ring(ideal.ring)
        key = (ring_name, frozenset(ideal.gens))
        if key in self._ideals:
            return self._ideals[key]
        name = self._fresh(hint, "I")
        self._ideals[key] = name
        self._lines.append(f"ideal {name} = (" + ", ".join(str(g) for g in ideal.gens) + f") in {ring_name};")
        return name

    def map(self, phi: LocalMapPres, hint: str = "") -> str:
        src = self.ring(phi.source)
        tgt = self.ring(phi.target)
        name = self._fresh(hint, "f")
        self._lines.append(f"map {name} : {src} -> {tgt} = [" + ", ".join(str(p) for p in phi.images) + "];")
        return name

    def line(self, text: str) -> None:
        self._lines.append(text)

    def text(self) -> str:
        header = [f"field {self.field};"]
        if self.trunc_degree is not None:
            header.append(f"set trunc_degree {self.trunc_degree};")
        return "\n".join(header + self._lines) + "\n"
