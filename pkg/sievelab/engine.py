import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Type, Union

from sievelab.covering.base_strategy import BaseStrategy
from sievelab.covering.search import densest_prime_class, max_covered_y, seed_ensemble
from sievelab.covering.strategies import STRATEGIES
from sievelab.covering.verify import crt_witness, verify_cover, verify_witness
from sievelab.errors import InvalidInputError
from sievelab.measure.concentration import (
    mc_concentration,
    mc_true_ratio,
    product_ratio_lower_bound,
)
from sievelab.measure.profile import g_moments
from sievelab.models.covering_models import CoverOutcome, MaxCoverResult, StrategyType
from sievelab.models.optimizer_models import (
    ExpectationParams,
    ExpectationResult,
    MinKResult,
    RatioCertificate,
    WeightStatistics,
)
from sievelab.models.simplex_models import BasisElement, BasisFamily
from sievelab.models.tuple_models import (
    AdmissibilityReport,
    GapBoundResult,
    SearchMethod,
    TupleSearchResult,
)
from sievelab.optimizer.certify import guaranteed_primes, min_k_certify, solve_ratio
from sievelab.optimizer.forms import build_forms
from sievelab.optimizer.weights import empirical_weight_expectation, gpy_weight_expectation
from sievelab.primes.gaps import gap_growth_curves, interval_prime_counts, max_gap_scan
from sievelab.simplex.basis import element_to_sympoly
from sievelab.storage.table_storage import TableStore, default_store
from sievelab.tuples.admissible import is_admissible, make_tuple, primes_after_k_tuple
from sievelab.tuples.pipeline import DEFAULT_K_RANGE, gap_bound_pipeline
from sievelab.tuples.search import narrowest_tuple

logger = logging.getLogger(__name__)


class SieveLabEngine:
    def __init__(self, workers: Optional[int] = None, store: Optional[TableStore] = None):
        self.workers = workers
        self.store = store or default_store()
        self._register_strategies()

    def _register_strategies(self):
        """Register available covering strategies"""
        self.strategies: Dict[StrategyType, Type[BaseStrategy]] = dict(STRATEGIES)

    def optimize(
        self,
        k: int,
        family: Union[str, BasisFamily, None] = None,
        max_degree: Optional[int] = None,
        target: Union[None, str, float, Fraction] = None,
        tolerance: Optional[float] = None,
    ) -> RatioCertificate:
        """Largest ratio sum J / I on one basis, checked against target"""
        forms = build_forms(k, family, max_degree, self.workers)
        certificate = solve_ratio(forms, tolerance=tolerance, target=target)
        if self.store is not None:
            self.store.store_certificate(certificate.to_document())
        return certificate

    def certify_min_k(
        self,
        target: Union[str, float, Fraction],
        k_range: Tuple[int, int],
        degrees: Optional[Sequence[int]] = None,
        family: Union[str, BasisFamily, None] = None,
    ) -> MinKResult:
        return min_k_certify(target, k_range, degrees=degrees, family=family, workers=self.workers)

    def expect(
        self, ratio: Union[str, float, Fraction], theta: Union[str, float, Fraction]
    ) -> ExpectationResult:
        return guaranteed_primes(ExpectationParams(ratio=ratio, theta=theta))

    def pipeline(
        self,
        theta: Union[str, float, Fraction],
        k_range: Tuple[int, int] = DEFAULT_K_RANGE,
        degrees: Optional[Sequence[int]] = None,
        family: Union[str, BasisFamily, None] = None,
    ) -> GapBoundResult:
        return gap_bound_pipeline(
            theta, k_range, degrees=degrees, family=family, workers=self.workers, store=self.store
        )

    def verify_tuple(self, shifts: Sequence[int]) -> AdmissibilityReport:
        return is_admissible(shifts)

    def search_tuple(self, k: int, budget: Optional[int] = None) -> TupleSearchResult:
        return narrowest_tuple(k, budget, workers=self.workers or 4)

    def shifted_primes_tuple(self, k: int) -> TupleSearchResult:
        return TupleSearchResult(
            best=primes_after_k_tuple(k), proven=False, method=SearchMethod.CONSTRUCTION
        )

    def cover(
        self,
        strategy: Union[str, StrategyType],
        x: int,
        y: Optional[int] = None,
        z: Optional[float] = None,
        seed: Optional[int] = None,
        emit_witness: bool = False,
    ) -> CoverOutcome:
        """
        Build and verify a plan for {1, .., y}. Without y the largest
        verified y is searched for first and that plan is reported.
        """
        try:
            strategy = StrategyType(strategy)
        except ValueError:
            raise InvalidInputError(f"No strategy found for type: {strategy}")
        strategy_class = self.strategies[strategy]

        max_cover = None
        if y is None:
            max_cover = max_covered_y(x, strategy, seed=seed, z=z)
            y = max_cover.y

        builder = strategy_class(x, y, z, seed)
        if not builder.validate_params():
            raise InvalidInputError(f"Invalid parameters for {strategy.value}: x={x}, y={y}, z={z}")
        report = builder.build()
        cover = verify_cover(report.plan)

        witness, witness_verified = None, None
        if emit_witness and cover.covered:
            witness = crt_witness(report.plan)
            witness_verified = verify_witness(witness)
        elif emit_witness:
            logger.warning("Plan for x=%d, y=%d does not cover, no witness emitted", x, y)

        return CoverOutcome(
            report=report,
            cover=cover,
            max_cover=max_cover,
            witness=witness,
            witness_verified=witness_verified,
        )

    def cover_ensemble(
        self, strategy: Union[str, StrategyType], x: int, seeds: Sequence[int]
    ) -> List[MaxCoverResult]:
        return seed_ensemble(x, strategy, seeds, self.workers)

    def prime_class(self, q: int, bound: Optional[int] = None):
        return densest_prime_class(q, bound)

    def gaps_scan(self, limit: int):
        return max_gap_scan(limit)

    def gaps_curves(self, limit: int, step: int):
        return gap_growth_curves(limit, step)

    def gaps_intervals(self, X: int, y: int, c: float = 1.0, samples: Optional[int] = None):
        return interval_prime_counts(X, y, c=c, samples=samples)

    def concentrate(
        self, k: int, samples: Optional[int] = None, threshold: float = 0.5, seed: int = 0
    ) -> dict:
        """Profile moments, the concentration estimate and both ratio estimates for one k"""
        return {
            "profile": g_moments(k),
            "concentration": mc_concentration(k, samples, threshold, seed),
            "lower_bound": product_ratio_lower_bound(k, samples, seed),
            "true_ratio": mc_true_ratio(k, samples, seed),
        }

    def weights(
        self,
        shifts: Sequence[int],
        R: int,
        X: int,
        ell: int = 0,
        gpy: bool = False,
    ) -> WeightStatistics:
        """
        Direct weights for a small tuple. The multidimensional weight uses
        F = (1 - P1)^ell on k variables; ``gpy`` switches to the
        one-dimensional log power weight.
        """
        tuple_ = make_tuple(shifts)
        if gpy:
            return gpy_weight_expectation(tuple_, R, X, ell)
        element = BasisElement(family=BasisFamily.BOUNDARY_P2, boundary_power=ell)
        return empirical_weight_expectation(tuple_, R, X, element_to_sympoly(element, tuple_.k))
