import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from sievelab.config import get_section
from sievelab.errors import BudgetExceededError, InvalidInputError
from sievelab.models.settings_models import TupleSettings
from sievelab.models.tuple_models import SearchMethod, TupleSearchResult
from sievelab.primes.sieve import primes_up_to
from sievelab.tuples.admissible import (
    first_primes_after,
    is_admissible,
    make_tuple,
    primes_after_k_tuple,
    stored_tuple,
)

logger = logging.getLogger(__name__)

# seeds that get a local search, best first
LOCAL_SEARCH_SEEDS = 8


class _Counter:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceededError(f"tuple search exceeded its budget of {self.limit} steps")


class _Occupancy:
    """Residue counts mod each prime p <= k, refusing any shift that fills every class."""

    def __init__(self, primes: Sequence[int]):
        self.primes = list(primes)
        self.counts: Dict[int, List[int]] = {p: [0] * p for p in self.primes}
        self.filled: Dict[int, int] = {p: 0 for p in self.primes}

    def fits(self, h: int) -> bool:
        return all(
            self.counts[p][h % p] or self.filled[p] + 1 < p for p in self.primes
        )

    def add(self, h: int) -> None:
        for p in self.primes:
            r = h % p
            if not self.counts[p][r]:
                self.filled[p] += 1
            self.counts[p][r] += 1

    def remove(self, h: int) -> None:
        for p in self.primes:
            r = h % p
            self.counts[p][r] -= 1
            if not self.counts[p][r]:
                self.filled[p] -= 1


def _search_diameter(k: int, diameter: int, counter: _Counter) -> Optional[Tuple[int, ...]]:
    """Lexicographically smallest admissible tuple 0 = h_1 < .. < h_k = diameter."""
    occupancy = _Occupancy(primes_up_to(k).tolist())
    occupancy.add(0)
    if not occupancy.fits(diameter):
        return None
    occupancy.add(diameter)
    chosen = [0]

    def extend(start: int, remaining: int) -> bool:
        if remaining == 0:
            return True
        for h in range(start, diameter - remaining + 1):
            counter.spend()
            if not occupancy.fits(h):
                continue
            occupancy.add(h)
            chosen.append(h)
            if extend(h + 1, remaining - 1):
                return True
            chosen.pop()
            occupancy.remove(h)
        return False

    if extend(1, k - 2):
        return tuple(chosen) + (diameter,)
    return None


def _exhaustive(k: int, counter: _Counter) -> Tuple[int, ...]:
    diameter = k - 1
    while True:
        found = _search_diameter(k, diameter, counter)
        if found is not None:
            return found
        diameter += 1


def _local_search(shifts: Sequence[int], counter: _Counter) -> Tuple[int, ...]:
    """Repeatedly swap an end element for an interior integer while admissibility holds."""
    current = sorted(shifts)
    try:
        improved = len(current) > 2
        while improved:
            improved = False
            for trial in (current[:-1], current[1:]):
                present = set(trial)
                for c in range(trial[0] + 1, trial[-1]):
                    if c in present:
                        continue
                    counter.spend()
                    candidate = sorted(trial + [c])
                    if is_admissible(candidate).admissible:
                        current = candidate
                        improved = True
                        break
                if improved:
                    break
    except BudgetExceededError:
        pass
    return tuple(h - current[0] for h in current)


def _seeds(k: int, window: int) -> List[Tuple[int, ...]]:
    candidates = {tuple(primes_after_k_tuple(k).shifts)}
    stored = stored_tuple(k)
    if stored is not None:
        candidates.add(tuple(stored.shifts))
    primes = first_primes_after(0, k + window)
    for j in range(window):
        run = primes[j : j + k]
        if is_admissible(run).admissible:
            candidates.add(tuple(h - run[0] for h in run))
    return sorted(candidates, key=lambda s: (s[-1], s))


def _heuristic(k: int, budget: int, window: int, workers: int) -> Tuple[Tuple[int, ...], int]:
    seeds = _seeds(k, window)[:LOCAL_SEARCH_SEEDS]
    share = max(1, budget // len(seeds))
    counters = [_Counter(share) for _ in seeds]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(_local_search, seeds, counters))
    best = min(results, key=lambda s: (s[-1], s))
    return best, sum(c.used for c in counters)


def narrowest_tuple(
    k: int, budget: Optional[int] = None, workers: int = 4
) -> TupleSearchResult:
    """
    Narrowest admissible k-tuple. Up to the exhaustive limit the answer is
    proven minimal (and lexicographically first among minimal ones); beyond
    it, or when the exhaustive search runs out of budget, the best tuple from
    seeded local search is returned unproven.
    """
    if k < 2:
        raise InvalidInputError(f"k must be at least 2, got {k}")
    settings = get_section("tuples", TupleSettings)
    budget = budget or settings.search_budget

    if k <= settings.exhaustive_limit:
        counter = _Counter(budget)
        try:
            shifts = _exhaustive(k, counter)
            return TupleSearchResult(
                best=make_tuple(shifts),
                proven=True,
                method=SearchMethod.EXHAUSTIVE,
                budget_used=counter.used,
            )
        except BudgetExceededError:
            logger.warning("Exhaustive search for k=%d ran out of budget, using heuristics", k)

    shifts, used = _heuristic(k, budget, settings.seed_window, workers)
    return TupleSearchResult(
        best=make_tuple(shifts), proven=False, method=SearchMethod.HEURISTIC, budget_used=used
    )
