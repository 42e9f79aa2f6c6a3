from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class OptimizerSettings(BaseModel):
    family: str = Field(default="boundary-even", description="Default basis family tag")
    max_degree: int = Field(default=23, ge=0)
    tolerance: float = Field(default=1e-12, gt=0)
    initial_digits: int = Field(
        default=60, ge=20, description="Starting gmpy2 precision (decimal digits) for the reduction"
    )
    max_digits: int = Field(default=1200, ge=20)
    workers: int = Field(default=4, ge=1)


class MeasureSettings(BaseModel):
    spread: float = Field(
        default=3.0, gt=0, description="Rate multiplier c = spread * k log k of G"
    )
    cutoff_exponent: float = Field(
        default=0.45, gt=0, description="Support of G is [0, k^-cutoff_exponent]"
    )
    samples: int = Field(default=10_000, ge=1)
    confidence_z: float = Field(default=1.96, gt=0)


class TupleSettings(BaseModel):
    exhaustive_limit: int = Field(default=8, ge=2)
    search_budget: int = Field(default=2_000_000, ge=1)
    seed_window: int = Field(
        default=400, ge=0, description="How many offsets m to try for prime seeds"
    )


class CoveringSettings(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    max_trials: int = Field(default=64, ge=1)
    max_y: int = Field(default=200_000, ge=1)
    random_upper: Fraction = Field(
        default=Fraction(1, 2), description="Random stage covers primes in (x/3, random_upper * x]"
    )
    workers: int = Field(default=4, ge=1)

    @field_validator("random_upper", mode="before")
    @classmethod
    def parse_fraction(cls, value):
        return value if isinstance(value, Fraction) else Fraction(str(value))


class PrimeSettings(BaseModel):
    max_span: int = Field(default=200_000_000, ge=1)
    exhaustive_span: int = Field(default=10_000_000, ge=1)
    segment_size: int = Field(default=1 << 20, ge=1024)


class StorageSettings(BaseModel):
    enabled: bool = False
    database_uri: Optional[str] = "sqlite:///sievelab.db"
