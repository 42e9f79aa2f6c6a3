"""
Monte Carlo over Z_1, .., Z_k i.i.d. with density G^2.

Streams come from a counter-based Philox generator keyed by the seed, and the
samples are drawn row by row in fixed-size blocks, so every estimate is a pure
function of (k, samples, seed).
"""

import logging
from math import inf, isinf, log, sqrt
from typing import Optional, Tuple

import numpy as np

from sievelab.config import get_section
from sievelab.errors import InsufficientSamplesError, InvalidInputError
from sievelab.measure.profile import g_moments, g_partial_integral, g_quantile
from sievelab.models.measure_models import (
    GProfile,
    ProbabilityEstimate,
    RatioBound,
    TrueRatioEstimate,
)
from sievelab.models.settings_models import MeasureSettings

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000
BLOCK_VALUES = 1 << 22


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def sample_z(profile: GProfile, size: int, seed: int) -> np.ndarray:
    """Independent draws of Z by inverse-CDF sampling."""
    return g_quantile(profile, _generator(seed).random(size))


def _sample_sums(profile: GProfile, samples: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Per sample: the sum of the first k - 1 coordinates and the last coordinate."""
    k = profile.k
    rng = _generator(seed)
    rows = max(1, BLOCK_VALUES // k)
    partial = np.empty(samples)
    last = np.empty(samples)
    for start in range(0, samples, rows):
        stop = min(start + rows, samples)
        block = g_quantile(profile, rng.random((stop - start, k)))
        partial[start:stop] = block[:, :-1].sum(axis=1)
        last[start:stop] = block[:, -1]
    return partial, last


def _settings(samples: Optional[int]) -> Tuple[int, float]:
    settings = get_section("measure", MeasureSettings)
    samples = samples or settings.samples
    if samples < MIN_SAMPLES:
        raise InvalidInputError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    return samples, settings.confidence_z


def _estimate(k, threshold, samples, seed, hits, z) -> ProbabilityEstimate:
    p = hits / samples
    return ProbabilityEstimate(
        k=k,
        threshold=threshold,
        samples=samples,
        seed=seed,
        estimate=p,
        radius=z * sqrt(p * (1 - p) / samples),
    )


def mc_concentration(
    k: int, samples: Optional[int] = None, threshold: float = 0.5, seed: int = 0
) -> ProbabilityEstimate:
    """Estimate P(Z_1 + .. + Z_k < threshold)."""
    samples, z = _settings(samples)
    if threshold <= 0:
        raise InvalidInputError(f"threshold must be positive, got {threshold}")
    if isinf(threshold):
        return _estimate(k, inf, samples, seed, samples, z)
    partial, last = _sample_sums(g_moments(k), samples, seed)
    hits = int(np.count_nonzero(partial + last < threshold))
    return _estimate(k, threshold, samples, seed, hits, z)


def product_ratio_lower_bound(
    k: int, samples: Optional[int] = None, seed: int = 0
) -> RatioBound:
    """
    k (int_0^{1/2} G)^2 P(sum Z < 1/2) / P(sum Z < 1), a lower bound for
    sum J / I at F = prod G(t_i) restricted to the simplex.
    """
    samples, z = _settings(samples)
    profile = g_moments(k)
    partial, last = _sample_sums(profile, samples, seed)
    total = partial + last

    p_half = _estimate(k, 0.5, samples, seed, int(np.count_nonzero(total < 0.5)), z)
    p_one = _estimate(k, 1.0, samples, seed, int(np.count_nonzero(total < 1.0)), z)
    if p_one.estimate == 0:
        raise InsufficientSamplesError(f"no sample of the sum fell below 1 at k={k}")

    half_integral = float(g_partial_integral(profile, 0.5))
    bound = k * half_integral**2 * p_half.estimate / p_one.estimate
    relative = p_one.radius / p_one.estimate
    if p_half.estimate:
        relative += p_half.radius / p_half.estimate
    logger.info("k=%d: ratio lower bound %.4f", k, bound)

    return RatioBound(
        k=k,
        samples=samples,
        seed=seed,
        bound=bound,
        half_integral=half_integral,
        p_half=p_half,
        p_one=p_one,
        radius=bound * relative,
        bound_over_log_k=bound / log(k) if k >= 2 else None,
    )


def mc_true_ratio(k: int, samples: Optional[int] = None, seed: int = 0) -> TrueRatioEstimate:
    """
    sum J / I for F = prod G(t_i) on the simplex, using
    J_l = E[H(1 - sum_{i != l} Z_i)^2] and I = P(sum Z_i < 1).
    Shares its samples with product_ratio_lower_bound for the same seed.
    """
    samples, _ = _settings(samples)
    profile = g_moments(k)
    partial, last = _sample_sums(profile, samples, seed)

    i_value = float(np.count_nonzero(partial + last < 1.0)) / samples
    if i_value == 0:
        raise InsufficientSamplesError(f"no sample of the sum fell below 1 at k={k}")
    j_value = float(np.mean(g_partial_integral(profile, 1.0 - partial) ** 2))
    return TrueRatioEstimate(
        k=k,
        samples=samples,
        seed=seed,
        j_sum=k * j_value,
        i_value=i_value,
        ratio=k * j_value / i_value,
    )
