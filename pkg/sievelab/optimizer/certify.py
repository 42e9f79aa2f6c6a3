import logging
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence, Tuple, Union

from mpmath import mp
from tqdm import tqdm

from sievelab.config import get_config, get_section
from sievelab.errors import InvalidInputError, SearchExhaustedError
from sievelab.models.optimizer_models import (
    ExpectationParams,
    ExpectationResult,
    FormPair,
    KAttempt,
    MinKResult,
    RatioCertificate,
)
from sievelab.models.settings_models import OptimizerSettings
from sievelab.models.simplex_models import BasisFamily
from sievelab.optimizer.eigensolver import largest_generalized_eigenpair
from sievelab.optimizer.forms import build_forms

logger = logging.getLogger(__name__)


def closed_form_ratio(k: int, ell: int) -> Fraction:
    """Ratio sum J / I for the single function (1 - P1)^ell: 2k(2l+1) / ((l+1)(k+2l+1))."""
    if k < 1 or ell < 0:
        raise InvalidInputError(f"need k >= 1 and ell >= 0, got k={k}, ell={ell}")
    return Fraction(2 * k * (2 * ell + 1), (ell + 1) * (k + 2 * ell + 1))


def _as_fraction(value) -> Optional[Fraction]:
    if value is None or isinstance(value, Fraction):
        return value
    return Fraction(str(value))


def solve_ratio(
    forms: FormPair,
    tolerance: Optional[float] = None,
    target: Union[None, str, float, Fraction] = None,
    initial_digits: Optional[int] = None,
    max_digits: Optional[int] = None,
) -> RatioCertificate:
    settings = get_section("optimizer", OptimizerSettings)
    tolerance = tolerance or settings.tolerance
    target = _as_fraction(target)

    pair = largest_generalized_eigenpair(
        forms.m1,
        forms.m2,
        tolerance,
        initial_digits=initial_digits or settings.initial_digits,
        max_digits=max_digits or settings.max_digits,
    )
    with mp.workdps(pair.digits):
        decimal = mp.nstr(mp.mpf(pair.eigenvalue.numerator) / pair.eigenvalue.denominator, 30)
    logger.info("k=%d degree=%d: lambda=%s", forms.k, forms.max_degree, decimal)

    return RatioCertificate(
        k=forms.k,
        family=forms.family,
        max_degree=forms.max_degree,
        basis_labels=[e.label for e in forms.basis],
        lambda_max=float(pair.eigenvalue),
        lambda_decimal=decimal,
        exact_ratio=pair.exact_ratio,
        f=[float(v) for v in pair.f],
        residual=pair.residual,
        tolerance=tolerance,
        digits=pair.digits,
        target=target,
        exceeds_target=target is not None and pair.exact_ratio > target,
        forms=forms,
    )


def guaranteed_primes(params: ExpectationParams) -> ExpectationResult:
    """
    Expected number of primes among L_1(n), .., L_k(n) under w in the eps -> 0
    limit, and the count m it guarantees for infinitely many n. Since eps > 0
    is lost, m primes need the limit to exceed m - 1 strictly.
    """
    expectation = params.ratio * params.theta / 2
    return ExpectationResult(expectation_limit=expectation, m=max(1, ceil(expectation)))


def min_k_certify(
    target_ratio: Union[str, float, Fraction],
    k_range: Tuple[int, int],
    degrees: Optional[Sequence[int]] = None,
    family: Union[str, BasisFamily, None] = None,
    inclusive: bool = False,
    tolerance: Optional[float] = None,
    workers: Optional[int] = None,
) -> MinKResult:
    """
    Smallest k in k_range whose basis reaches target_ratio. Each k tries the
    nested bases of ``degrees`` in increasing order and stops at the first that
    certifies. A rejected k only means these bases fall short; it proves nothing
    about the true optimum.
    """
    settings = get_section("optimizer", OptimizerSettings)
    target = _as_fraction(target_ratio)
    low, high = k_range
    if low < 1 or high < low:
        raise InvalidInputError(f"invalid k range [{low}, {high}]")
    degrees = sorted(degrees) if degrees else [settings.max_degree]
    family = family or settings.family

    log = []
    show_progress = bool(get_config().get("progress", False))
    for k in tqdm(range(low, high + 1), desc="Scanning k", disable=not show_progress):
        best = None
        for degree in degrees:
            certificate = solve_ratio(
                build_forms(k, family, degree, workers), tolerance=tolerance, target=target
            )
            best = certificate
            reached = certificate.exact_ratio >= target if inclusive else certificate.exceeds_target
            if reached:
                logger.info("k=%d certified at degree %d", k, degree)
                return MinKResult(k=k, target=target, certificate=certificate, log=log)
        log.append(
            KAttempt(k=k, max_degree=best.max_degree, lambda_max=best.lambda_max, certified=False)
        )

    raise SearchExhaustedError(
        f"no k in [{low}, {high}] reaches ratio {target} with degrees {degrees}", log=log
    )
