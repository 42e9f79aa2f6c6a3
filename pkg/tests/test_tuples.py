import json
import random
from itertools import combinations
from math import log

import pytest
from sympy import primerange

from sievelab.errors import InvalidInputError
from sievelab.models.tuple_models import LinearSystem, SearchMethod
from sievelab.tuples.admissible import (
    is_admissible,
    load_tuple_file,
    make_tuple,
    primes_after_k_tuple,
    stored_tuple,
    system_is_admissible,
)
from sievelab.tuples.search import narrowest_tuple


def brute_force_min_diameter(k):
    primes = list(primerange(2, k + 1))
    diameter = k - 1
    while True:
        for interior in combinations(range(1, diameter), k - 2):
            shifts = (0,) + interior + (diameter,)
            if all(len({h % p for h in shifts}) < p for p in primes):
                return diameter
        diameter += 1


def test_twin_pair_is_admissible():
    report = is_admissible([0, 2])
    assert report.admissible
    assert report.witnesses == {2: 1}
    assert report.covering_prime is None


def test_consecutive_odd_triple_is_not_admissible():
    report = is_admissible([0, 2, 4])
    assert not report.admissible
    assert report.covering_prime == 3


def test_is_admissible_rejects_unsorted_shifts():
    with pytest.raises(InvalidInputError):
        is_admissible([0, 4, 2])


def test_make_tuple_canonicalizes_and_checks():
    tuple_ = make_tuple([5, 7, 11])
    assert tuple_.shifts == (0, 2, 6)
    assert tuple_.k == 3
    assert tuple_.diameter == 6
    for p, r in tuple_.witnesses.items():
        assert all(h % p != r for h in tuple_.shifts)
    with pytest.raises(InvalidInputError):
        make_tuple([0, 2, 4])


def test_witnesses_miss_every_shift():
    tuple_ = stored_tuple(54)
    assert set(tuple_.witnesses) == set(primerange(2, 55))
    for p, r in tuple_.witnesses.items():
        assert all(h % p != r for h in tuple_.shifts)


def test_stored_54_tuple():
    tuple_ = stored_tuple(54)
    assert tuple_.k == 54
    assert tuple_.diameter == 270
    assert is_admissible(tuple_.shifts).admissible
    assert stored_tuple(13) is None


def test_load_tuple_file_accepts_arrays_objects_and_packaged_names(tmp_path):
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps([0, 2, 6]))
    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"shifts": [0, 4, 6]}))
    assert load_tuple_file(bare) == [0, 2, 6]
    assert load_tuple_file(wrapped) == [0, 4, 6]
    assert len(load_tuple_file("tuple54.json")) == 54
    with pytest.raises(InvalidInputError):
        load_tuple_file(tmp_path / "missing.json")


@pytest.mark.parametrize(
    "k,shifts", [(2, (0, 2)), (5, (0, 4, 6, 10, 12))]
)
def test_primes_after_k_examples(k, shifts):
    assert primes_after_k_tuple(k).shifts == shifts


@pytest.mark.parametrize("k", [10, 50, 100, 500, 1000])
def test_primes_after_k_diameter_is_of_order_k_log_k(k):
    tuple_ = primes_after_k_tuple(k)
    assert tuple_.k == k
    assert 0.5 <= tuple_.diameter / (k * log(k)) <= 3


def test_admissibility_is_invariant_under_translation_and_reflection():
    rng = random.Random(11)
    for _ in range(200):
        shifts = sorted(rng.sample(range(60), rng.randint(2, 9)))
        expected = is_admissible(shifts).admissible
        t = rng.randint(-100, 100)
        assert is_admissible([h + t for h in shifts]).admissible == expected
        assert is_admissible(sorted(-h for h in shifts)).admissible == expected


def test_linear_system_from_admissible_shifts():
    assert system_is_admissible(LinearSystem.from_shifts([0, 2, 6])).admissible
    report = system_is_admissible(LinearSystem.from_shifts([0, 2, 4]))
    assert not report.admissible
    assert report.covering_prime == 3


def test_linear_system_checks_primes_dividing_coefficients():
    # 5n + 1 and 5n + 3 never vanish mod 5
    report = system_is_admissible(LinearSystem(functions=((5, 1), (5, 3), (1, 3))))
    assert report.admissible
    assert 5 in report.witnesses
    # 2n (2n + 1) is always even
    report = system_is_admissible(LinearSystem(functions=((2, 0), (2, 1))))
    assert not report.admissible
    assert report.covering_prime == 2


def test_modulus_shifted_system():
    # n + h q with q divisible by every prime up to k stays admissible
    system = LinearSystem.from_shifts([0, 2, 4], modulus=6)
    assert system.functions == ((1, 0), (1, 12), (1, 24))
    assert system_is_admissible(system).admissible


def test_linear_system_validation():
    with pytest.raises(ValueError):
        LinearSystem(functions=((0, 1),))
    with pytest.raises(ValueError):
        LinearSystem(functions=((1, 1), (1, 1)))


def test_narrowest_pair():
    result = narrowest_tuple(2)
    assert result.best.shifts == (0, 2)
    assert result.proven
    assert result.method is SearchMethod.EXHAUSTIVE


def test_narrowest_five_tuple_is_lexicographically_first():
    result = narrowest_tuple(5)
    assert result.proven
    assert result.best.diameter == 12
    assert result.best.shifts == (0, 2, 6, 8, 12)


@pytest.mark.parametrize(
    "k,diameter", [(2, 2), (3, 6), (4, 8), (5, 12), (6, 16), (7, 20), (8, 26)]
)
def test_exhaustive_minimal_diameters(k, diameter):
    result = narrowest_tuple(k)
    assert result.proven
    assert result.best.diameter == diameter
    assert is_admissible(result.best.shifts).admissible


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_exhaustive_search_agrees_with_brute_force(k):
    assert narrowest_tuple(k).best.diameter == brute_force_min_diameter(k)


def test_heuristic_never_loses_to_shifted_primes():
    result = narrowest_tuple(10)
    assert not result.proven
    assert result.method is SearchMethod.HEURISTIC
    assert result.best.diameter <= primes_after_k_tuple(10).diameter
    assert result.best.diameter >= 32


def test_tiny_budget_falls_back_to_heuristics():
    result = narrowest_tuple(8, budget=10)
    assert not result.proven
    assert result.best.diameter >= 26
    assert is_admissible(result.best.shifts).admissible


def test_narrowest_rejects_singletons():
    with pytest.raises(InvalidInputError):
        narrowest_tuple(1)


def test_search_reads_configured_limit(override_config):
    override_config("tuples", exhaustive_limit=4)
    assert not narrowest_tuple(5).proven


@pytest.mark.slow
def test_heuristic_54_tuple_is_within_270():
    result = narrowest_tuple(54)
    assert result.best.k == 54
    assert result.best.diameter <= 270
    assert is_admissible(result.best.shifts).admissible
