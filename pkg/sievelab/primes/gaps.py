import logging
from math import log
from typing import List, Optional

import numpy as np
from tqdm import tqdm

from sievelab.config import get_config, get_section
from sievelab.errors import BudgetExceededError, InvalidInputError
from sievelab.models.prime_models import GapRecord, GrowthRow, GrowthTable, IntervalCountReport
from sievelab.models.settings_models import PrimeSettings
from sievelab.primes.sieve import next_prime, sieve_range

logger = logging.getLogger(__name__)


def max_gap_scan(limit: int) -> List[GapRecord]:
    """Maximal gaps p -> next with p < limit, in increasing order of p."""
    if limit < 3:
        raise InvalidInputError(f"limit must be at least 3, got {limit}")
    primes = sieve_range(2, limit)
    primes = np.append(primes, next_prime(int(primes[-1])))
    gaps = np.diff(primes)
    previous_best = np.concatenate(([0], np.maximum.accumulate(gaps)[:-1]))
    return [
        GapRecord(p=int(primes[i]), next=int(primes[i + 1]), gap=int(gaps[i]))
        for i in np.flatnonzero(gaps > previous_best)
    ]


def max_gap_scan_streaming(limit: int, window: Optional[int] = None) -> List[GapRecord]:
    """Same records as max_gap_scan, walking the primes one window at a time."""
    if limit < 3:
        raise InvalidInputError(f"limit must be at least 3, got {limit}")
    window = window or get_section("primes", PrimeSettings).segment_size
    records = []
    best = 0
    previous = None
    low = 2
    while previous is None or previous < limit:
        for p in sieve_range(low, low + window).tolist():
            if previous is not None and p - previous > best:
                best = p - previous
                records.append(GapRecord(p=previous, next=p, gap=best))
            previous = p
            if p >= limit:
                break
        low += window
    return records


def interval_prime_counts(
    X: int, y: int, c: float = 1.0, samples: Optional[int] = None
) -> IntervalCountReport:
    """
    Histogram of #primes in the closed interval [x, x + y] for x in [X, 2X].
    Every x is scanned when the range fits the exhaustive span, otherwise a
    deterministic stratified sample of x is taken.
    """
    settings = get_section("primes", PrimeSettings)
    if X < 1 or y < 1:
        raise InvalidInputError(f"need X >= 1 and y >= 1, got X={X}, y={y}")
    if X + y > settings.max_span:
        raise BudgetExceededError(f"interval scan over [{X}, {2 * X + y}] exceeds budget")

    span = X + 1
    exhaustive = span <= settings.exhaustive_span
    if exhaustive:
        xs = np.arange(X, 2 * X + 1, dtype=np.int64)
    else:
        count = samples or settings.exhaustive_span
        xs = X + ((np.arange(count) + 0.5) * span / count).astype(np.int64)

    primes = sieve_range(X, 2 * X + y + 1)
    is_prime = np.zeros(X + y + 1, dtype=np.int64)
    is_prime[primes - X] = 1
    prefix = np.concatenate(([0], np.cumsum(is_prime)))
    # primes in [x, x + y] = prefix[x + y - X + 1] - prefix[x - X]
    counts = prefix[xs - X + y + 1] - prefix[xs - X]

    threshold = c * log(y)
    histogram = {int(value): int(n) for value, n in enumerate(np.bincount(counts)) if n}
    return IntervalCountReport(
        X=X,
        y=y,
        c=c,
        exhaustive=exhaustive,
        sample_count=len(xs),
        histogram=histogram,
        mean_count=float(counts.mean()),
        threshold=threshold,
        meeting_threshold=int(np.count_nonzero(counts >= threshold)),
    )


def rankin_form(X: float) -> Optional[float]:
    """
    log X * loglog X * loglogloglog X / logloglog X, or None until the
    fourfold log is positive (X > e^(e^e), about 3.8e6).
    """
    value = float(X)
    logs = []
    for _ in range(4):
        if value <= 0:
            return None
        value = log(value)
        logs.append(value)
    L, LL, LLL, LLLL = logs
    if LLLL <= 0:
        return None
    return L * LL * LLLL / LLL


def gap_growth_curves(limit: int, step: int) -> GrowthTable:
    if limit < 1000:
        raise InvalidInputError(f"limit must be at least 1000, got {limit}")
    if step < 1 or step > limit:
        raise InvalidInputError(f"step must lie in [1, {limit}], got {step}")

    records = max_gap_scan(limit)
    record_p = np.array([r.p for r in records], dtype=np.int64)
    record_gap = np.array([r.gap for r in records], dtype=np.int64)

    rows = []
    show_progress = bool(get_config().get("progress", False))
    for X in tqdm(range(step, limit + 1, step), desc="Growth rows", disable=not show_progress):
        below = np.searchsorted(record_p, X, side="left")
        rows.append(
            GrowthRow(
                X=X,
                max_gap=int(record_gap[below - 1]) if below else 0,
                log_squared=log(X) ** 2,
                rankin_form=rankin_form(X),
            )
        )
    return GrowthTable(limit=limit, step=step, rows=rows)
