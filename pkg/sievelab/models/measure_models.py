from typing import Optional

from pydantic import BaseModel, Field


class GProfile(BaseModel):
    """
    G(t) = scale * sqrt(rate) / (1 + rate * t) on [0, cutoff], zero beyond,
    with rate = spread * k * log k and scale fixed by the integral of G^2 being 1.

    The configured defaults (spread 3, cutoff k^-0.45) replace the textbook
    choice of rate k log k on [0, k^-3/4]. That profile misses the mean
    constraint mu < 1/(3k) at k = 100. The calibrated one meets it from k = 100
    up to 10^4 while k sigma^2 and k (int G)^2 keep their trends.
    """

    k: int = Field(ge=1)
    spread: float
    cutoff_exponent: float
    rate: float
    cutoff: float
    scale: float
    mu: float = Field(description="Mean of Z with density G^2")
    sigma2: float = Field(description="Variance of Z")
    g_integral: float = Field(description="Integral of G over its support")
    g_square_integral: float = Field(description="Quadrature check of the integral of G^2")
    mean_constraint_ok: bool = Field(description="mu < 1/(3k)")
    k_sigma2: float
    k_g_integral_sq: float


class ProbabilityEstimate(BaseModel):
    k: int
    threshold: float
    samples: int
    seed: int
    estimate: float
    radius: float = Field(description="Binomial confidence radius at the configured z")


class RatioBound(BaseModel):
    k: int
    samples: int
    seed: int
    bound: float
    half_integral: float = Field(description="Integral of G over [0, 1/2]")
    p_half: ProbabilityEstimate
    p_one: ProbabilityEstimate
    radius: float
    bound_over_log_k: Optional[float] = None


class TrueRatioEstimate(BaseModel):
    k: int
    samples: int
    seed: int
    j_sum: float
    i_value: float
    ratio: float
