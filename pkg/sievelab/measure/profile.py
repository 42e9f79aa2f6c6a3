"""
The one-dimensional profile G(t) = scale * sqrt(c) / (1 + c t) on [0, T] whose
product over coordinates gives the concentration lower bound.

With W = 1 + c T every quantity has a closed form:

    scale^2       = W / (W - 1)
    CDF of G^2    = scale^2 * c t / (1 + c t)
    int t G^2     = scale^2 (log W + 1/W - 1) / c
    int t^2 G^2   = scale^2 (W - 2 log W - 1/W) / c^2
    int_0^u G     = scale * log(1 + c min(u, T)) / sqrt(c)
"""

from math import log, sqrt
from typing import Optional

import numpy as np
from scipy import integrate

from sievelab.config import get_section
from sievelab.errors import InvalidInputError
from sievelab.models.measure_models import GProfile
from sievelab.models.settings_models import MeasureSettings

QUAD_OPTIONS = {"epsabs": 0.0, "epsrel": 1e-12, "limit": 400}


def profile_rate(k: int, spread: float) -> float:
    return spread * k * max(log(k), log(2))


def _resolve(spread: Optional[float], cutoff_exponent: Optional[float]):
    settings = get_section("measure", MeasureSettings)
    return (
        settings.spread if spread is None else spread,
        settings.cutoff_exponent if cutoff_exponent is None else cutoff_exponent,
    )


def g_value(profile: GProfile, t):
    t = np.asarray(t, dtype=float)
    inside = (t >= 0) & (t <= profile.cutoff)
    return np.where(inside, profile.scale * sqrt(profile.rate) / (1 + profile.rate * t), 0.0)


def g_cdf(profile: GProfile, t):
    """P(Z <= t) for Z with density G^2."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, profile.cutoff)
    c = profile.rate
    return profile.scale**2 * c * t / (1 + c * t)


def g_quantile(profile: GProfile, u):
    u = np.asarray(u, dtype=float)
    v = u / profile.scale**2
    return v / (profile.rate * (1 - v))


def g_partial_integral(profile: GProfile, u):
    """H(u) = integral of G over [0, u], zero for u <= 0."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, profile.cutoff)
    return profile.scale * np.log1p(profile.rate * u) / sqrt(profile.rate)


def closed_form_moments(rate: float, cutoff: float) -> dict:
    W = 1 + rate * cutoff
    s2 = W / (W - 1)
    mu = s2 * (log(W) + 1 / W - 1) / rate
    second = s2 * (W - 2 * log(W) - 1 / W) / rate**2
    return {
        "scale": sqrt(s2),
        "mu": mu,
        "sigma2": second - mu**2,
        "g_integral": sqrt(s2) * log(W) / sqrt(rate),
    }


def _quad(func, cutoff: float, rate: float) -> float:
    # the mass sits within a few multiples of 1/c of the origin
    points = [p / rate for p in (1, 10, 100, 1000) if p / rate < cutoff]
    value, _ = integrate.quad(func, 0.0, cutoff, points=points or None, **QUAD_OPTIONS)
    return value


def g_moments(
    k: int, spread: Optional[float] = None, cutoff_exponent: Optional[float] = None
) -> GProfile:
    """
    Normalize G for this k and measure its moments by adaptive quadrature,
    reporting the constraint indicators mu < 1/(3k), k sigma^2 and k (int G)^2.
    """
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")
    spread, cutoff_exponent = _resolve(spread, cutoff_exponent)
    if spread <= 0 or cutoff_exponent <= 0:
        raise InvalidInputError("spread and cutoff_exponent must be positive")

    rate = profile_rate(k, spread)
    cutoff = k ** (-cutoff_exponent)
    scale = closed_form_moments(rate, cutoff)["scale"]

    def density(t):
        return scale**2 * rate / (1 + rate * t) ** 2

    mass = _quad(density, cutoff, rate)
    mu = _quad(lambda t: t * density(t), cutoff, rate)
    second = _quad(lambda t: t * t * density(t), cutoff, rate)
    g_integral = _quad(lambda t: scale * sqrt(rate) / (1 + rate * t), cutoff, rate)
    sigma2 = second - mu * mu

    return GProfile(
        k=k,
        spread=spread,
        cutoff_exponent=cutoff_exponent,
        rate=rate,
        cutoff=cutoff,
        scale=scale,
        mu=mu,
        sigma2=sigma2,
        g_integral=g_integral,
        g_square_integral=mass,
        mean_constraint_ok=mu < 1 / (3 * k),
        k_sigma2=k * sigma2,
        k_g_integral_sq=k * g_integral**2,
    )
