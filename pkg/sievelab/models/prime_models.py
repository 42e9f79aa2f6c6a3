from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class GapRecord(BaseModel):
    p: int
    next: int = Field(description="Least prime greater than p")
    gap: int
    maximal: bool = Field(
        default=True, description="Gap exceeds every gap between smaller consecutive primes"
    )


class IntervalCountReport(BaseModel):
    X: int
    y: int
    c: float
    exhaustive: bool
    sample_count: int
    histogram: Dict[int, int] = Field(description="#primes in (x, x+y] -> number of x")
    mean_count: float
    threshold: float = Field(description="c * log y")
    meeting_threshold: int


class GrowthRow(BaseModel):
    X: int
    max_gap: int
    log_squared: float
    rankin_form: Optional[float] = Field(
        default=None, description="Absent where a nested logarithm is undefined"
    )


class GrowthTable(BaseModel):
    limit: int
    step: int
    rows: List[GrowthRow]
