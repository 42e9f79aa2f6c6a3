from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_serializer, model_validator
from sympy import isprime


class StrategyType(str, Enum):
    TRIVIAL = "trivial"
    ERDOS_RANKIN = "erdos-rankin"
    GREEDY_ONLY = "greedy-only"
    RANDOM_WEIGHTED = "random-weighted"


class Stage(str, Enum):
    SHIFTED = "shifted"  # a_p = p - 1 for every prime
    SMALL = "small"  # a_p = 1, p < z
    MEDIUM = "medium"  # a_p = 0, z <= p <= x/3
    RANDOM = "random"
    GREEDY = "greedy"


class CoveringPlan(BaseModel):
    x: int = Field(ge=2)
    y: int = Field(ge=0)
    choices: Dict[int, int] = Field(description="Prime p <= x -> residue a_p in [0, p)")
    stages: Dict[int, Stage] = Field(default_factory=dict)
    strategy: StrategyType
    z: Optional[float] = None
    seed: Optional[int] = None

    @model_validator(mode="after")
    def check_choices(self):
        for p, a in self.choices.items():
            if p > self.x or not isprime(p) or not 0 <= a < p:
                raise ValueError(f"invalid choice a_{p} = {a} for x = {self.x}")
        if self.stages and set(self.stages) != set(self.choices):
            raise ValueError("stage labels must partition the chosen primes")
        return self


class CoverReport(BaseModel):
    covered: bool
    uncovered: List[int] = Field(default_factory=list)


class SurvivorSet(BaseModel):
    y: int
    elements: List[int]


class GapWitness(BaseModel):
    N: int
    x: int
    y: int
    factors: List[int] = Field(description="factors[m - 1] is a prime <= x dividing N + m")

    @field_serializer("N")
    def decimal_n(self, value: int) -> str:
        return str(value)


class PlanReport(BaseModel):
    plan: CoveringPlan
    survivors: SurvivorSet = Field(description="Survivors after the small and medium stages")
    hit_counts: Dict[int, int] = Field(
        default_factory=dict, description="Survivor n -> #{random-stage p : n = a_p mod p}"
    )
    mean_hit_expectation: Optional[float] = Field(
        default=None, description="Mean over survivors of the expected random-stage hits"
    )


class MaxCoverResult(BaseModel):
    x: int
    strategy: StrategyType
    y: int
    trials: int
    seed: Optional[int] = None
    plan: Optional[CoveringPlan] = Field(default=None, exclude=True)


class PrimeClassReport(BaseModel):
    q: int
    bound: int
    residue: int
    count: int
    mean_count: float = Field(description="Primes below bound per reduced residue class")


class CoverOutcome(BaseModel):
    """Everything one ``cover`` run produces: the plan, its check and an optional witness."""

    report: PlanReport
    cover: CoverReport
    max_cover: Optional[MaxCoverResult] = None
    witness: Optional[GapWitness] = None
    witness_verified: Optional[bool] = None
