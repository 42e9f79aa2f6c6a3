from fractions import Fraction

import pytest
from gmpy2 import mpfr

from sievelab.errors import (
    ConvergenceError,
    InvalidInputError,
    LinearlyDependentBasisError,
    SearchExhaustedError,
)
from sievelab.models.optimizer_models import ExpectationParams, FormPair
from sievelab.models.simplex_models import BasisElement, BasisFamily
from sievelab.optimizer.certify import (
    closed_form_ratio,
    guaranteed_primes,
    min_k_certify,
    solve_ratio,
)
from sievelab.optimizer.eigensolver import (
    exact_rayleigh_quotient,
    largest_generalized_eigenpair,
    rationalize,
)
from sievelab.optimizer.forms import assemble_I_form, assemble_J_form, build_forms


def singleton_forms(k, ell):
    basis = [BasisElement(family=BasisFamily.BOUNDARY_P2, boundary_power=ell)]
    return FormPair(
        k=k,
        family=BasisFamily.BOUNDARY_P2,
        max_degree=ell,
        basis=basis,
        m1=assemble_J_form(basis, k),
        m2=assemble_I_form(basis, k),
    )


def test_closed_form_ratio_examples():
    assert closed_form_ratio(4, 1) == Fraction(12, 7)
    for k in range(1, 30):
        assert closed_form_ratio(k, 0) == 2 - Fraction(2, k + 1)
    assert Fraction(39, 10) < closed_form_ratio(10_000, 100) < 4


def test_closed_form_ratio_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        closed_form_ratio(0, 1)
    with pytest.raises(InvalidInputError):
        closed_form_ratio(3, -1)


def test_constant_basis_ratio():
    certificate = solve_ratio(build_forms(2, "boundary-p2", 0))
    assert certificate.exact_ratio == Fraction(4, 3)
    assert certificate.lambda_max == pytest.approx(4 / 3, rel=1e-12)
    assert certificate.lambda_decimal.startswith("1.33333333333333333333")


@pytest.mark.parametrize("k", range(2, 101))
@pytest.mark.parametrize("ell", range(11))
def test_singleton_basis_matches_closed_form(k, ell):
    certificate = solve_ratio(singleton_forms(k, ell))
    expected = closed_form_ratio(k, ell)
    assert certificate.exact_ratio == expected
    assert abs(certificate.lambda_max - float(expected)) <= 1e-12 * float(expected)


def test_certificate_contract_on_a_full_basis():
    forms = build_forms(5, "boundary-p2", 8)
    certificate = solve_ratio(forms, target=2)
    assert certificate.residual <= 1e-8
    assert float(certificate.exact_ratio) >= certificate.lambda_max - 1e-9
    recomputed = exact_rayleigh_quotient(
        forms.m1, forms.m2, [Fraction(v) for v in certificate.f]
    )
    assert float(recomputed) == pytest.approx(certificate.lambda_max, rel=1e-9)
    assert certificate.exceeds_target
    assert certificate.exact_ratio > 2
    assert any(v < 0 for v in certificate.f)


def test_rationalize_keeps_the_sign():
    assert rationalize(mpfr("-3.5")) == Fraction(-7, 2)
    assert rationalize(mpfr("0.25")) == Fraction(1, 4)
    assert rationalize(-mpfr(2) ** -70) == Fraction(-1, 2**70)


def test_eigenvector_with_mixed_signs():
    m1 = [[Fraction(2), Fraction(-1)], [Fraction(-1), Fraction(2)]]
    m2 = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    pair = largest_generalized_eigenpair(m1, m2, 1e-12)
    assert pair.f[0] * pair.f[1] < 0
    assert abs(pair.exact_ratio - 3) < Fraction(1, 10**30)
    assert exact_rayleigh_quotient(m1, m2, pair.f) == pair.exact_ratio


def test_solve_ratio_is_deterministic():
    forms = build_forms(4, "boundary-p2", 6)
    first = solve_ratio(forms).to_document()
    second = solve_ratio(forms).to_document()
    assert first == second


def test_power_sum_family_reaches_a_larger_ratio_than_the_constant():
    certificate = solve_ratio(build_forms(3, "power-sums", 4))
    assert certificate.exact_ratio > closed_form_ratio(3, 0)


def test_nested_bases_give_non_decreasing_ratios():
    ratios = [solve_ratio(build_forms(6, "boundary-p2", d)).lambda_max for d in (0, 2, 4, 6, 8)]
    assert all(b >= a - 1e-12 for a, b in zip(ratios, ratios[1:]))


@pytest.mark.parametrize("k,degree", [(4, 6), (7, 5)])
def test_boundary_even_dominates_boundary_p2(k, degree):
    p2 = solve_ratio(build_forms(k, "boundary-p2", degree))
    even = solve_ratio(build_forms(k, "boundary-even", degree))
    assert even.lambda_max >= p2.lambda_max - 1e-12
    assert even.forms.size > p2.forms.size


def test_duplicate_basis_is_linearly_dependent():
    element = BasisElement(family=BasisFamily.BOUNDARY_P2, boundary_power=1)
    basis = [element, element]
    forms = FormPair(
        k=3,
        family=BasisFamily.BOUNDARY_P2,
        max_degree=1,
        basis=basis,
        m1=assemble_J_form(basis, 3),
        m2=assemble_I_form(basis, 3),
    )
    with pytest.raises(LinearlyDependentBasisError):
        solve_ratio(forms, max_digits=240)


def test_unreachable_tolerance_raises_convergence_error():
    with pytest.raises(ConvergenceError):
        solve_ratio(build_forms(4, "boundary-p2", 4), tolerance=1e-300, max_digits=120)


@pytest.mark.parametrize(
    "ratio,theta,limit,m",
    [
        ("4.002", Fraction(1, 2), Fraction(10005, 10000), 2),
        ("2.1", 1, Fraction(105, 100), 2),
        (1, Fraction(1, 2), Fraction(1, 4), 1),
        (4, Fraction(1, 2), Fraction(1), 1),
    ],
)
def test_guaranteed_primes(ratio, theta, limit, m):
    result = guaranteed_primes(ExpectationParams(ratio=ratio, theta=theta))
    assert result.expectation_limit == limit
    assert result.m == m


def test_expectation_params_validate_theta():
    with pytest.raises(ValueError):
        ExpectationParams(ratio=4, theta=0)
    with pytest.raises(ValueError):
        ExpectationParams(ratio=4, theta="3/2")


def test_min_k_certify_two_primes_under_full_level():
    result = min_k_certify(2, (3, 10), degrees=[4, 8])
    assert result.k == 5
    assert result.certificate.exceeds_target
    assert [attempt.k for attempt in result.log] == [3, 4]
    assert all(not attempt.certified and attempt.lambda_max < 2 for attempt in result.log)


def test_min_k_certify_constant_basis_member():
    k = 6
    result = min_k_certify(closed_form_ratio(k, 0), (k, k + 2), degrees=[0], inclusive=True)
    assert result.k == k
    assert result.certificate.exact_ratio == closed_form_ratio(k, 0)


def test_min_k_certify_exhausted_range_carries_log():
    with pytest.raises(SearchExhaustedError) as info:
        min_k_certify(4, (2, 4), degrees=[2])
    assert [attempt.k for attempt in info.value.log] == [2, 3, 4]


def test_min_k_certify_rejects_bad_range():
    with pytest.raises(InvalidInputError):
        min_k_certify(2, (5, 3))


@pytest.mark.slow
def test_k54_boundary_even_degree23_exceeds_four():
    forms = build_forms(54, "boundary-even", 23)
    assert forms.size == 1236
    certificate = solve_ratio(forms, target=4)
    assert certificate.exceeds_target
    assert certificate.exact_ratio > 4
    assert certificate.residual <= 1e-8


@pytest.mark.slow
def test_k54_boundary_p2_degree23_stays_below_four():
    certificate = solve_ratio(build_forms(54, "boundary-p2", 23), target=4)
    assert not certificate.exceeds_target
    assert 3.7 < certificate.lambda_max < 3.71


@pytest.mark.slow
def test_k54_ratio_grows_with_the_basis():
    ratios = [solve_ratio(build_forms(54, "boundary-p2", d)).lambda_max for d in (5, 11, 17, 23)]
    assert all(b >= a - 1e-12 for a, b in zip(ratios, ratios[1:]))


@pytest.mark.slow
def test_min_k_certify_four_in_fifties(override_config):
    override_config("optimizer", family="boundary-even")
    result = min_k_certify(4, (50, 60), degrees=[23])
    assert result.k <= 54
    assert result.certificate.exact_ratio > 4
