from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sievelab.models.optimizer_models import KAttempt, RatioCertificate


class AdmissibilityReport(BaseModel):
    admissible: bool
    witnesses: Dict[int, int] = Field(
        default_factory=dict, description="Prime p -> a residue no shift occupies"
    )
    covering_prime: Optional[int] = Field(
        default=None, description="Prime whose residues are all occupied"
    )


class AdmissibleTuple(BaseModel):
    shifts: Tuple[int, ...]
    witnesses: Dict[int, int] = Field(default_factory=dict)

    @field_validator("shifts", mode="before")
    @classmethod
    def canonical(cls, value):
        shifts = [int(h) for h in value]
        if not shifts:
            raise ValueError("a tuple needs at least one shift")
        if any(b <= a for a, b in zip(shifts, shifts[1:])):
            raise ValueError("shifts must be strictly increasing")
        return tuple(h - shifts[0] for h in shifts)

    @property
    def k(self) -> int:
        return len(self.shifts)

    @property
    def diameter(self) -> int:
        return self.shifts[-1] - self.shifts[0]


class LinearSystem(BaseModel):
    """L_i(n) = a_i * n + b_i."""

    functions: Tuple[Tuple[int, int], ...]

    @model_validator(mode="after")
    def check_functions(self):
        if any(a < 1 for a, _ in self.functions):
            raise ValueError("every a_i must be >= 1")
        if len(set(self.functions)) != len(self.functions):
            raise ValueError("linear functions must be distinct")
        return self

    @classmethod
    def from_shifts(cls, shifts, modulus: int = 1) -> "LinearSystem":
        return cls(functions=tuple((1, h * modulus) for h in shifts))


class SearchMethod(str, Enum):
    EXHAUSTIVE = "exhaustive"
    HEURISTIC = "heuristic"
    CONSTRUCTION = "shifted-primes"


class TupleSearchResult(BaseModel):
    best: AdmissibleTuple
    proven: bool
    method: SearchMethod
    budget_used: int = 0


class GapBoundResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    theta: Fraction
    target_ratio: Fraction
    certified: bool
    k: Optional[int] = None
    certificate: Optional[RatioCertificate] = None
    tuple_search: Optional[TupleSearchResult] = None
    bound: Optional[int] = None
    log: List[KAttempt] = Field(default_factory=list)
    reason: Optional[str] = None
