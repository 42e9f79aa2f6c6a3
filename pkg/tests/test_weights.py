import pytest

from sievelab.errors import BudgetExceededError, InvalidInputError
from sievelab.models.simplex_models import BasisElement, BasisFamily
from sievelab.optimizer.weights import empirical_weight_expectation, gpy_weight_expectation
from sievelab.primes.sieve import sieve_range
from sievelab.simplex.basis import element_to_sympoly
from sievelab.simplex.polynomials import constant
from sievelab.tuples.admissible import make_tuple


def boundary_profile(k, ell=1):
    return element_to_sympoly(BasisElement(family=BasisFamily.BOUNDARY_P2, boundary_power=ell), k)


def test_degenerate_weight_is_prime_density():
    X = 1000
    stats = empirical_weight_expectation(make_tuple([0]), 2, X, constant(1))
    primes = len(sieve_range(X, 2 * X + 1))
    assert stats.zero_weight_count == 0
    assert stats.min_weight == 1.0
    assert stats.raw_weight_sum == X + 1
    assert stats.prime_hit_expectation == pytest.approx(primes / (X + 1))


def test_twin_tuple_expectation_is_positive_and_deterministic():
    tuple_ = make_tuple([0, 2])
    first = empirical_weight_expectation(tuple_, 10, 100_000, boundary_profile(2))
    second = empirical_weight_expectation(tuple_, 10, 100_000, boundary_profile(2))
    assert first.prime_hit_expectation > 0
    assert first == second


def test_weights_are_squares():
    stats = empirical_weight_expectation(make_tuple([0, 2, 6]), 12, 5000, boundary_profile(3, 2))
    assert stats.min_weight >= 0
    assert stats.raw_weight_sum > 0


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_gpy_weights(ell):
    stats = gpy_weight_expectation(make_tuple([0, 2]), 10, 10_000, ell)
    assert stats.min_weight >= 0
    assert stats.raw_weight_sum > 0
    assert 0 < stats.prime_hit_expectation <= 2


def test_weight_inputs_are_checked():
    with pytest.raises(InvalidInputError):
        empirical_weight_expectation(make_tuple([0, 2, 6, 8, 12]), 5, 100, boundary_profile(5))
    with pytest.raises(InvalidInputError):
        empirical_weight_expectation(make_tuple([0, 2]), 40, 1000, boundary_profile(2))
    with pytest.raises(InvalidInputError):
        empirical_weight_expectation(make_tuple([0, 2]), 10, 1000, boundary_profile(3))
    with pytest.raises(InvalidInputError):
        gpy_weight_expectation(make_tuple([0, 2]), 10, 1000, -1)


def test_divisor_budget():
    with pytest.raises(BudgetExceededError):
        gpy_weight_expectation(make_tuple([0, 2]), 30, 5000, 0, budget=10)
