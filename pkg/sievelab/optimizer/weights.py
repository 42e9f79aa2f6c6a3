"""
Direct evaluation of sieve weights w(n) over n in [X, 2X] for small tuples.

Only trends and signs are meaningful at this scale; the asymptotic constants
of the sieve are far away.
"""

import logging
from math import log
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from sievelab.errors import BudgetExceededError, InvalidInputError
from sievelab.models.optimizer_models import WeightStatistics
from sievelab.models.simplex_models import SymPoly
from sievelab.models.tuple_models import AdmissibleTuple
from sievelab.primes.sieve import distinct_prime_factors, least_factor_tables
from sievelab.simplex.polynomials import evaluate

logger = logging.getLogger(__name__)

MAX_WEIGHT_K = 4
DEFAULT_DIVISOR_BUDGET = 20_000_000


def _squarefree_divisors(primes: Sequence[int], bound: int) -> List[Tuple[int, int]]:
    """(d, number of prime factors) for squarefree d < bound built from primes."""
    found = [(1, 0)]
    for p in primes:
        found += [(d * p, count + 1) for d, count in found if d * p < bound]
    return found


def _divisor_tuples(
    factor_sets: Sequence[Tuple[int, ...]], bound: int
) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Pairwise coprime (d_1, .., d_k), d_i | L_i(n) squarefree, prod d_i < bound."""

    def extend(i: int, chosen: Tuple[int, ...], used: frozenset, product: int, count: int):
        if i == len(factor_sets):
            yield chosen, count
            return
        available = [p for p in factor_sets[i] if p not in used]
        for d, c in _squarefree_divisors(available, -(-bound // product)):
            new_used = used | {p for p in available if d % p == 0}
            yield from extend(i + 1, chosen + (d,), new_used, product * d, count + c)

    yield from extend(0, (), frozenset(), 1, 0)


class Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceededError(
                f"divisor enumeration exceeded its budget of {self.limit} terms"
            )


def _check_inputs(tuple_: AdmissibleTuple, R: int, X: int) -> None:
    if R < 2:
        raise InvalidInputError(f"R must be at least 2, got {R}")
    if R * R >= X:
        raise InvalidInputError(f"need R^2 < X, got R={R}, X={X}")


def _collect(
    tuple_: AdmissibleTuple,
    R: int,
    X: int,
    divisor_sum: Callable[[List[Tuple[int, ...]], Budget], float],
    budget: int,
) -> WeightStatistics:
    top = 2 * X + tuple_.shifts[-1]
    lpf, _ = least_factor_tables(top)
    counter = Budget(budget)

    raw = 0.0
    hits = 0.0
    zero = 0
    smallest = None
    for n in range(X, 2 * X + 1):
        values = [n + h for h in tuple_.shifts]
        factor_sets = [distinct_prime_factors(v, lpf) for v in values]
        w = divisor_sum(factor_sets, counter) ** 2
        raw += w
        hits += w * sum(1 for v in values if v >= 2 and int(lpf[v]) == v)
        zero += w == 0.0
        smallest = w if smallest is None else min(smallest, w)

    return WeightStatistics(
        shifts=list(tuple_.shifts),
        R=R,
        X=X,
        n_count=X + 1,
        raw_weight_sum=raw,
        prime_hit_expectation=hits / raw if raw else 0.0,
        zero_weight_count=zero,
        min_weight=smallest,
    )


def empirical_weight_expectation(
    tuple_: AdmissibleTuple,
    R: int,
    X: int,
    F: SymPoly,
    budget: Optional[int] = None,
) -> WeightStatistics:
    """
    w(n) = (sum over d_i | n + h_i, prod d_i < R of mu(prod d_i) F(log d_1/log R, ..))^2,
    with F the supplied symmetric polynomial.
    """
    _check_inputs(tuple_, R, X)
    if tuple_.k > MAX_WEIGHT_K:
        raise InvalidInputError(f"direct weights are limited to k <= {MAX_WEIGHT_K}")
    if F.k != tuple_.k:
        raise InvalidInputError(f"F has {F.k} variables, the tuple has {tuple_.k} shifts")

    log_R = log(R)
    cache: Dict[Tuple[int, ...], float] = {}

    def divisor_sum(factor_sets, counter: Budget) -> float:
        total = 0.0
        for ds, count in _divisor_tuples(factor_sets, R):
            counter.spend()
            if ds not in cache:
                cache[ds] = evaluate(F, [log(d) / log_R for d in ds])
            total += (-1) ** count * cache[ds]
        return total

    return _collect(tuple_, R, X, divisor_sum, budget or DEFAULT_DIVISOR_BUDGET)


def gpy_weight_expectation(
    tuple_: AdmissibleTuple,
    R: int,
    X: int,
    ell: int,
    budget: Optional[int] = None,
) -> WeightStatistics:
    """
    w(n) = (sum over d | prod (n + h_i), d < R of mu(d) log(R/d)^(k + ell))^2.
    ell = 0 is the classical Selberg choice.
    """
    _check_inputs(tuple_, R, X)
    if ell < 0:
        raise InvalidInputError(f"ell must be non-negative, got {ell}")
    power = tuple_.k + ell

    def divisor_sum(factor_sets, counter: Budget) -> float:
        primes = sorted(set().union(*factor_sets))
        total = 0.0
        for d, count in _squarefree_divisors(primes, R):
            counter.spend()
            total += (-1) ** count * log(R / d) ** power
        return total

    return _collect(tuple_, R, X, divisor_sum, budget or DEFAULT_DIVISOR_BUDGET)
