import logging
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from sievelab.errors import InvalidInputError, SearchExhaustedError
from sievelab.models.simplex_models import BasisFamily
from sievelab.models.tuple_models import GapBoundResult
from sievelab.optimizer.certify import min_k_certify
from sievelab.storage.table_storage import TableStore, default_store
from sievelab.tuples.search import narrowest_tuple

logger = logging.getLogger(__name__)

DEFAULT_K_RANGE = (2, 60)


def gap_bound_pipeline(
    theta: Union[str, float, Fraction],
    k_range: Tuple[int, int] = DEFAULT_K_RANGE,
    degrees: Optional[Sequence[int]] = None,
    family: Union[str, BasisFamily, None] = None,
    tuple_budget: Optional[int] = None,
    workers: Optional[int] = None,
    store: Optional[TableStore] = None,
) -> GapBoundResult:
    """
    theta -> smallest certified k with ratio > 2/theta (expected prime count
    above 1) -> narrowest known admissible k-tuple -> its diameter as a bound
    on liminf (p_{n+1} - p_n). A k range with no certified k is reported in
    the result rather than raised.
    """
    theta = theta if isinstance(theta, Fraction) else Fraction(str(theta))
    if not (0 < theta <= 1):
        raise InvalidInputError(f"theta must lie in (0, 1], got {theta}")
    target = 2 / theta

    try:
        found = min_k_certify(target, k_range, degrees=degrees, family=family, workers=workers)
    except SearchExhaustedError as e:
        logger.warning("No certified k for theta=%s: %s", theta, e)
        return GapBoundResult(
            theta=theta, target_ratio=target, certified=False, log=e.log, reason=str(e)
        )

    store = store or default_store()
    if store is not None:
        store.store_certificate(found.certificate.to_document())

    search = narrowest_tuple(found.k, tuple_budget)
    logger.info(
        "theta=%s: k=%d, tuple diameter %d (%s)",
        theta,
        found.k,
        search.best.diameter,
        "proven" if search.proven else search.method.value,
    )
    return GapBoundResult(
        theta=theta,
        target_ratio=target,
        certified=True,
        k=found.k,
        certificate=found.certificate,
        tuple_search=search,
        bound=search.best.diameter,
        log=found.log,
    )
