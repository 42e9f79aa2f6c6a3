"""
Strategies choosing one residue class a_p per prime p <= x so that every
element of {1, .., y} lies in some chosen class.
"""

import logging
from fractions import Fraction
from math import exp, log
from typing import Dict, List, Optional, Sequence, Tuple, Type, Union

import numpy as np

from sievelab.config import get_section
from sievelab.covering.base_strategy import BaseStrategy
from sievelab.covering.verify import survivor_characterization
from sievelab.errors import InvalidInputError, SieveLabError
from sievelab.models.covering_models import (
    CoveringPlan,
    PlanReport,
    Stage,
    StrategyType,
    SurvivorSet,
)
from sievelab.models.settings_models import CoveringSettings
from sievelab.primes.sieve import primes_up_to

logger = logging.getLogger(__name__)

Choices = Dict[int, int]
Stages = Dict[int, Stage]


def default_z(x: int) -> float:
    """exp(log x * logloglog x / (2 loglog x)), at least 3."""
    if x <= 16:
        return 3.0
    L = log(x)
    LL = log(L)
    LLL = log(LL)
    return max(exp(L * LLL / (2 * LL)), 3.0)


def _elements(y: int) -> np.ndarray:
    return np.arange(1, y + 1, dtype=np.int64)


def _fix(p: int, a: int, stage: Stage, uncovered, choices: Choices, stages: Stages):
    choices[p] = a
    stages[p] = stage
    return uncovered[uncovered % p != a]


def _greedy(primes: Sequence[int], uncovered, choices: Choices, stages: Stages):
    """Each prime in turn takes the class holding the most uncovered elements, smallest on ties."""
    for p in primes:
        if len(uncovered):
            a = int(np.argmax(np.bincount(uncovered % p, minlength=p)))
        else:
            a = 0
        uncovered = _fix(p, a, Stage.GREEDY, uncovered, choices, stages)
    return uncovered


class _StagedStrategy(BaseStrategy):
    """Shared small and medium stages: a_p = 1 for p < z, a_p = 0 for z <= p <= x/3."""

    def validate_params(self) -> bool:
        if self.z is None:
            self.z = default_z(self.x)
        return self.x >= 2 and self.y >= 0 and 2 < self.z < self.x**0.5

    def split_primes(self) -> Tuple[List[int], List[int], List[int]]:
        small, medium, large = [], [], []
        for p in primes_up_to(self.x).tolist():
            if p < self.z:
                small.append(p)
            elif 3 * p <= self.x:
                medium.append(p)
            else:
                large.append(p)
        return small, medium, large

    def sieve_stages(self, choices: Choices, stages: Stages):
        small, medium, large = self.split_primes()
        uncovered = _elements(self.y)
        for p in small:
            uncovered = _fix(p, 1 % p, Stage.SMALL, uncovered, choices, stages)
        for p in medium:
            uncovered = _fix(p, 0, Stage.MEDIUM, uncovered, choices, stages)

        survivors = SurvivorSet(y=self.y, elements=uncovered.tolist())
        if self.y < self.z**2:
            expected = survivor_characterization(self.x, self.y, self.z)
            if expected != survivors.elements:
                raise SieveLabError("survivor set disagrees with its characterization")
        else:
            logger.info(
                "y=%d >= z^2=%.1f: survivor characterization check skipped", self.y, self.z**2
            )
        return uncovered, survivors, large

    def plan(self, choices: Choices, stages: Stages) -> CoveringPlan:
        return CoveringPlan(
            x=self.x,
            y=self.y,
            choices=choices,
            stages=stages,
            strategy=self.get_strategy_type(),
            z=self.z,
            seed=self.seed,
        )


class TrivialStrategy(BaseStrategy):
    """a_p = p - 1 for every prime, so n is covered iff n + 1 has a prime factor <= x."""

    def validate_params(self) -> bool:
        return self.x >= 2 and self.y >= 0

    def build(self) -> PlanReport:
        primes = primes_up_to(self.x).tolist()
        plan = CoveringPlan(
            x=self.x,
            y=self.y,
            choices={p: p - 1 for p in primes},
            stages={p: Stage.SHIFTED for p in primes},
            strategy=StrategyType.TRIVIAL,
        )
        return PlanReport(plan=plan, survivors=SurvivorSet(y=self.y, elements=list(range(1, self.y + 1))))

    @classmethod
    def get_strategy_type(cls) -> StrategyType:
        return StrategyType.TRIVIAL


class GreedyOnlyStrategy(BaseStrategy):
    def validate_params(self) -> bool:
        return self.x >= 2 and self.y >= 0

    def build(self) -> PlanReport:
        choices, stages = {}, {}
        _greedy(primes_up_to(self.x).tolist(), _elements(self.y), choices, stages)
        plan = CoveringPlan(
            x=self.x, y=self.y, choices=choices, stages=stages, strategy=StrategyType.GREEDY_ONLY
        )
        return PlanReport(plan=plan, survivors=SurvivorSet(y=self.y, elements=list(range(1, self.y + 1))))

    @classmethod
    def get_strategy_type(cls) -> StrategyType:
        return StrategyType.GREEDY_ONLY


class ErdosRankinStrategy(_StagedStrategy):
    def build(self) -> PlanReport:
        choices, stages = {}, {}
        uncovered, survivors, large = self.sieve_stages(choices, stages)
        _greedy(large, uncovered, choices, stages)
        return PlanReport(plan=self.plan(choices, stages), survivors=survivors)

    @classmethod
    def get_strategy_type(cls) -> StrategyType:
        return StrategyType.ERDOS_RANKIN


class RandomWeightedStrategy(_StagedStrategy):
    """
    Primes in (x/3, upper * x] draw a_p independently with probability
    proportional to the number of survivors of the small and medium stages
    in each class; the remaining large primes are greedy.
    """

    def __init__(self, x, y, z=None, seed=None, upper: Optional[Fraction] = None):
        super().__init__(x, y, z, 0 if seed is None else seed)
        self.upper = upper or get_section("covering", CoveringSettings).random_upper

    def build(self) -> PlanReport:
        choices, stages = {}, {}
        uncovered, survivors, large = self.sieve_stages(choices, stages)
        bound = self.upper * self.x
        randomized = [p for p in large if p <= bound]
        rest = [p for p in large if p > bound]

        fixed = np.array(survivors.elements, dtype=np.int64)
        rng = np.random.Generator(np.random.Philox(self.seed))
        hits = np.zeros(len(fixed), dtype=np.int64)
        expectation = np.zeros(len(fixed))
        for p in randomized:
            if len(fixed):
                counts = np.bincount(fixed % p, minlength=p)
                a = int(rng.choice(p, p=counts / counts.sum()))
                hits += fixed % p == a
                expectation += counts[fixed % p] / len(fixed)
            else:
                a = 0
            uncovered = _fix(p, a, Stage.RANDOM, uncovered, choices, stages)

        _greedy(rest, uncovered, choices, stages)
        return PlanReport(
            plan=self.plan(choices, stages),
            survivors=survivors,
            hit_counts={int(n): int(h) for n, h in zip(fixed, hits)},
            mean_hit_expectation=float(expectation.mean()) if len(fixed) else None,
        )

    @classmethod
    def get_strategy_type(cls) -> StrategyType:
        return StrategyType.RANDOM_WEIGHTED


STRATEGIES: Dict[StrategyType, Type[BaseStrategy]] = {
    cls.get_strategy_type(): cls
    for cls in (TrivialStrategy, ErdosRankinStrategy, GreedyOnlyStrategy, RandomWeightedStrategy)
}


def build_plan(
    strategy: Union[str, StrategyType],
    x: int,
    y: int,
    z: Optional[float] = None,
    seed: Optional[int] = None,
) -> PlanReport:
    try:
        strategy = StrategyType(strategy)
    except ValueError:
        raise InvalidInputError(f"No strategy found for type: {strategy}")
    builder = STRATEGIES[strategy](x, y, z, seed)
    if not builder.validate_params():
        raise InvalidInputError(f"Invalid parameters for {strategy.value}: x={x}, y={y}, z={z}")
    return builder.build()


def plan_erdos_rankin(x: int, y: int, z: Optional[float] = None) -> PlanReport:
    return build_plan(StrategyType.ERDOS_RANKIN, x, y, z)


def plan_random_weighted(
    x: int, y: int, z: Optional[float] = None, seed: int = 0
) -> PlanReport:
    return build_plan(StrategyType.RANDOM_WEIGHTED, x, y, z, seed)


def plan_greedy_only(x: int, y: int) -> PlanReport:
    return build_plan(StrategyType.GREEDY_ONLY, x, y)


def plan_trivial(x: int, y: int) -> PlanReport:
    return build_plan(StrategyType.TRIVIAL, x, y)
