# app/services/models.py
from typing import Dict, Literal, Optional

from pydantic import BaseModel, model_validator


class StableValue(BaseModel):
    """A jet-computed count together with whether it held at N, N+1 and N+2."""

    value: int
    stable: bool
    degree: int


class FlatStatus(BaseModel):
    kind: Literal["Flat", "NotFlat", "Unknown"]
    witness: Optional[str] = None

    @property
    def is_flat(self) -> Optional[bool]:
        if self.kind == "Unknown":
            return None
        return self.kind == "Flat"

    def __str__(self) -> str:
        return self.kind if self.witness is None else f"{self.kind} ({self.witness})"


class InvariantReport(BaseModel):
    subject: str
    kind: Literal["ring", "map"]
    verified_degree: int
    edim: int
    dim: Optional[int] = None
    cdim: Optional[int] = None
    delta: Dict[str, int] = {}
    mu: Optional[StableValue] = None
    eps2: Optional[StableValue] = None
    # reported, not certified
    ci_defect: Optional[int] = None
    rd: Optional[int] = None
    target_edim: Optional[int] = None
    fiber_edim: Optional[int] = None
    basically_regular: Optional[bool] = None
    weakly_regular: Optional[bool] = None
    regular: Optional[bool] = None
    flat: Optional[FlatStatus] = None

    @model_validator(mode="after")
    def _consistent(self):
        if self.dim is not None and self.cdim is not None and self.cdim != self.edim - self.dim:
            raise ValueError("cdim must equal edim - dim")
        if self.rd is not None and self.rd < 0:
            raise ValueError("rd is a nullity and cannot be negative")
        return self
