from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sievelab.models.simplex_models import BasisElement, BasisFamily

# Bound on liminf (p_{n+1} - p_n) under the generalized Elliott-Halberstam
# conjecture; quoted for reference, no routine here reproduces it.
GENERALIZED_EH_GAP_BOUND = 6


class FormPair(BaseModel):
    """The J-sum form (M1) and the I form (M2) on one basis."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int = Field(ge=1)
    family: BasisFamily
    max_degree: int = Field(ge=0)
    basis: List[BasisElement]
    m1: List[List[Fraction]]
    m2: List[List[Fraction]]

    @model_validator(mode="after")
    def check_shapes(self):
        size = len(self.basis)
        for name, matrix in (("m1", self.m1), ("m2", self.m2)):
            if len(matrix) != size or any(len(row) != size for row in matrix):
                raise ValueError(f"{name} must be {size}x{size}")
        return self

    @property
    def size(self) -> int:
        return len(self.basis)


class RatioCertificate(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int
    family: BasisFamily
    max_degree: int
    basis_labels: List[str]
    lambda_max: float = Field(description="Largest generalized eigenvalue of (M1, M2)")
    lambda_decimal: str = Field(description="lambda_max to 30 significant digits")
    exact_ratio: Fraction = Field(
        description="Rayleigh quotient of the rationalized f, recomputed exactly"
    )
    f: List[float] = Field(description="Coefficients of F~ in the basis")
    residual: float = Field(description="||A1 z - lambda A2 z|| / ||z|| after equilibration")
    tolerance: float
    digits: int = Field(description="Working precision of the reduction")
    target: Optional[Fraction] = None
    exceeds_target: bool = False
    forms: Optional[FormPair] = Field(default=None, exclude=True)

    def to_document(self) -> dict:
        """Canonical, timestamp-free JSON-ready view of the certificate."""
        return {
            "family": self.family.value,
            "k": self.k,
            "max_degree": self.max_degree,
            "basis": self.basis_labels,
            "lambda": self.lambda_decimal,
            "exact_ratio": f"{self.exact_ratio.numerator}/{self.exact_ratio.denominator}",
            "coefficients": [repr(c) for c in self.f],
            "residual": repr(self.residual),
            "tolerance": repr(self.tolerance),
            "digits": self.digits,
            "target": None if self.target is None else str(self.target),
            "exceeds_target": self.exceeds_target,
        }


class ExpectationParams(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    theta: Fraction = Field(description="Level of distribution; R = X^(theta/2 - eps)")
    ratio: Fraction
    k: Optional[int] = Field(default=None, ge=1)

    @field_validator("theta", "ratio", mode="before")
    @classmethod
    def exact(cls, value):
        # str() first so that 4.002 means 4002/1000 rather than its binary neighbour
        return value if isinstance(value, Fraction) else Fraction(str(value))

    @model_validator(mode="after")
    def check_ranges(self):
        if not (0 < self.theta <= 1):
            raise ValueError("theta must lie in (0, 1]")
        if self.ratio < 0:
            raise ValueError("ratio must be non-negative")
        return self


class ExpectationResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    expectation_limit: Fraction
    m: int = Field(ge=1)
    note: str = (
        "m >= 2 needs ratio*theta/2 > m - 1 strictly, since eps > 0 is lost in R = X^(theta/2-eps)"
    )


class KAttempt(BaseModel):
    k: int
    max_degree: int
    lambda_max: float
    certified: bool


class MinKResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int
    target: Fraction
    certificate: RatioCertificate
    log: List[KAttempt] = Field(
        default_factory=list,
        description="Best lambda per rejected k; a rejection is not an impossibility proof",
    )


class WeightStatistics(BaseModel):
    shifts: List[int]
    R: int
    X: int
    n_count: int
    raw_weight_sum: float
    normalized_weight_sum: float = 1.0
    prime_hit_expectation: float
    zero_weight_count: int
    min_weight: float
