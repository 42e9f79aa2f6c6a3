import logging
from math import isqrt
from typing import Optional, Tuple

import numpy as np

from sievelab.config import get_section
from sievelab.errors import BudgetExceededError, InvalidInputError
from sievelab.models.settings_models import PrimeSettings
from sievelab.storage.table_storage import TableStore, default_store

logger = logging.getLogger(__name__)


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit from one monolithic sieve."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def sieve_range(lo: int, hi: int, segment_size: Optional[int] = None) -> np.ndarray:
    """Primes in [lo, hi), sieved one segment at a time."""
    settings = get_section("primes", PrimeSettings)
    if lo < 0 or hi <= lo:
        raise InvalidInputError(f"need 0 <= lo < hi, got [{lo}, {hi})")
    if hi > 2**63:
        raise InvalidInputError("hi must not exceed 2^63")
    if hi - lo > settings.max_span or isqrt(hi - 1) > settings.max_span:
        raise BudgetExceededError(
            f"sieving [{lo}, {hi}) exceeds the span budget of {settings.max_span}"
        )
    segment_size = segment_size or settings.segment_size

    base = primes_up_to(isqrt(hi - 1))
    found = []
    low = max(lo, 2)
    while low < hi:
        high = min(low + segment_size, hi)
        mask = np.ones(high - low, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, -(-low // p) * p)
            mask[start - low :: p] = False
        found.append(low + np.flatnonzero(mask).astype(np.int64))
        low = high
    return np.concatenate(found) if found else np.array([], dtype=np.int64)


def _build_tables(limit: int) -> Tuple[np.ndarray, np.ndarray]:
    lpf = np.zeros(limit + 1, dtype=np.int64)
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    primes = primes_up_to(limit)
    for p in primes:
        p = int(p)
        if p * p <= limit:
            multiples = lpf[p * p :: p]
            multiples[multiples == 0] = p
            mu[p * p :: p * p] = 0
        mu[::p] *= -1
    unset = lpf == 0
    lpf[unset] = np.flatnonzero(unset)
    lpf[0] = 0
    if limit >= 1:
        lpf[1] = 1
    return lpf, mu


def least_factor_tables(
    limit: int, store: Optional[TableStore] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Least prime factor and Moebius tables indexed by n in [0, limit], with
    lpf(0) = 0, lpf(1) = 1 and mu(0) = 0.
    """
    settings = get_section("primes", PrimeSettings)
    if limit < 1:
        raise InvalidInputError(f"limit must be positive, got {limit}")
    if limit > settings.max_span:
        raise BudgetExceededError(f"table limit {limit} exceeds budget {settings.max_span}")

    store = store or default_store()
    if store is not None:
        cached = store.get_tables(limit)
        if cached is not None:
            logger.debug("Loaded sieve tables for limit %d from cache", limit)
            return cached

    lpf, mu = _build_tables(limit)
    if store is not None:
        store.store_tables(limit, lpf, mu)
    return lpf, mu


def distinct_prime_factors(n: int, lpf: np.ndarray) -> Tuple[int, ...]:
    factors = []
    while n > 1:
        p = int(lpf[n])
        factors.append(p)
        while n % p == 0:
            n //= p
    return tuple(factors)


def is_prime_trial(n: int) -> bool:
    """Primality by trial division; the independent oracle for the sieves."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def next_prime(n: int) -> int:
    """Least prime > n."""
    candidate = max(n + 1, 2)
    while not is_prime_trial(candidate):
        candidate += 1
    return candidate
