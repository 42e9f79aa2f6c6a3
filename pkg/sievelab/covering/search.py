import logging
from concurrent.futures import ThreadPoolExecutor
from math import log, sqrt
from typing import List, Optional, Sequence, Union

import numpy as np
from sympy import totient
from tqdm import tqdm

from sievelab.config import get_config, get_section
from sievelab.covering.strategies import build_plan
from sievelab.covering.verify import verify_cover
from sievelab.errors import BudgetExceededError, InvalidInputError
from sievelab.models.covering_models import MaxCoverResult, PrimeClassReport, StrategyType
from sievelab.models.settings_models import CoveringSettings
from sievelab.primes.sieve import primes_up_to

logger = logging.getLogger(__name__)


def max_covered_y(
    x: int,
    strategy: Union[str, StrategyType],
    budget: Optional[int] = None,
    seed: Optional[int] = None,
    z: Optional[float] = None,
) -> MaxCoverResult:
    """
    Largest y for which the strategy's plan for {1, .., y} verifies. The
    search gallops upward from y = x and then bisects; each trial builds a
    fresh plan for its own y and checks it in full. Coverage is not
    guaranteed monotone in y, so the answer is the largest verified y.
    """
    settings = get_section("covering", CoveringSettings)
    budget = budget or settings.max_trials
    try:
        strategy = StrategyType(strategy)
    except ValueError:
        raise InvalidInputError(f"No strategy found for type: {strategy}")

    trials = 0
    best, best_plan = 0, None

    def attempt(y: int) -> bool:
        nonlocal trials, best, best_plan
        if trials >= budget:
            raise BudgetExceededError(
                f"max_covered_y ran out of trials at x={x}",
                best=MaxCoverResult(
                    x=x, strategy=strategy, y=best, trials=trials, seed=seed, plan=best_plan
                ),
            )
        trials += 1
        plan = build_plan(strategy, x, y, z, seed).plan
        covered = verify_cover(plan).covered
        logger.debug("trial x=%d y=%d: %s", x, y, "covered" if covered else "uncovered")
        if covered and y > best:
            best, best_plan = y, plan
        return covered

    lo, hi = 0, max(1, x)
    while hi <= settings.max_y and attempt(hi):
        lo, hi = hi, 2 * hi
    hi = min(hi, settings.max_y + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if attempt(mid):
            lo = mid
        else:
            hi = mid

    return MaxCoverResult(x=x, strategy=strategy, y=best, trials=trials, seed=seed, plan=best_plan)


def seed_ensemble(
    x: int,
    strategy: Union[str, StrategyType],
    seeds: Sequence[int],
    workers: Optional[int] = None,
    budget: Optional[int] = None,
) -> List[MaxCoverResult]:
    """max_covered_y for each seed, in seed order."""
    workers = workers or get_section("covering", CoveringSettings).workers
    seeds = list(seeds)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(max_covered_y, x, strategy, budget, s) for s in seeds]
        results = [
            f.result()
            for f in tqdm(
                futures,
                desc=f"Seeds x={x}",
                disable=not get_config().get("progress", False),
            )
        ]
    return results


def densest_prime_class(q: int, bound: Optional[int] = None) -> PrimeClassReport:
    """Residue class mod q holding the most primes below bound (default q * sqrt(log q))."""
    if q < 2:
        raise InvalidInputError(f"q must be at least 2, got {q}")
    bound = bound or max(int(q * sqrt(log(q))), q + 1)
    primes = primes_up_to(bound - 1)
    primes = primes[q % primes != 0]
    counts = np.bincount(primes % q, minlength=q)
    residue = int(np.argmax(counts))
    reduced = int(totient(q))
    return PrimeClassReport(
        q=q,
        bound=bound,
        residue=residue,
        count=int(counts[residue]),
        mean_count=len(primes) / reduced,
    )
