import math
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
import sympy
from scipy import integrate

from sievelab.errors import InvalidInputError
from sievelab.models.simplex_models import BasisElement, BasisFamily, Signature, SymPoly
from sievelab.simplex.basis import element_to_sympoly, enumerate_signatures
from sievelab.simplex.integrals import (
    expand_to_monomials,
    factorial,
    integrate_sympoly,
    monomial_simplex_integral,
)
from sievelab.simplex.polynomials import (
    add,
    constant,
    evaluate,
    integrate_out_last,
    monomial_product,
    multiply,
    scale,
)


def power_sum(k, j):
    return SymPoly(k=k, terms={Signature(exponents=(j,)): 1})


def boundary(k, beta):
    return SymPoly(k=k, terms={Signature(boundary_power=beta): 1})


@pytest.mark.parametrize(
    "a,k,beta,expected",
    [
        ([], 1, 0, Fraction(1)),
        ([], 2, 0, Fraction(1, 2)),
        ([1], 2, 0, Fraction(1, 6)),
        ([], 1, 2, Fraction(1, 3)),
    ],
)
def test_monomial_simplex_integral_examples(a, k, beta, expected):
    assert monomial_simplex_integral(a, k, beta) == expected


def test_monomial_simplex_integral_rejects_too_many_exponents():
    with pytest.raises(InvalidInputError):
        monomial_simplex_integral([1, 1, 1], 2)


@pytest.mark.parametrize("a,beta", [((0, 0), 0), ((2, 1), 0), ((1, 1), 2), ((3, 0), 1)])
def test_two_dimensional_integrals_match_sympy(a, beta):
    t1, t2 = sympy.symbols("t1 t2")
    exact = sympy.integrate(
        t1 ** a[0] * t2 ** a[1] * (1 - t1 - t2) ** beta, (t1, 0, 1 - t2), (t2, 0, 1)
    )
    assert monomial_simplex_integral(list(a), 2, beta) == Fraction(int(exact.p), int(exact.q))


@pytest.mark.parametrize("a,beta", [((1, 0, 0), 0), ((2, 1, 0), 1), ((1, 1, 1), 0), ((0, 0, 2), 2)])
def test_three_dimensional_integrals_match_quadrature(a, beta):
    def f(t1, t2, t3):
        return t1 ** a[0] * t2 ** a[1] * t3 ** a[2] * (1 - t1 - t2 - t3) ** beta

    value, _ = integrate.nquad(
        f,
        [lambda t2, t3: (0, 1 - t2 - t3), lambda t3: (0, 1 - t3), (0, 1)],
        opts={"epsabs": 0, "epsrel": 1e-12},
    )
    exact = float(monomial_simplex_integral(list(a), 3, beta))
    assert abs(value - exact) <= 1e-10 * exact


def test_dirichlet_recursion_integrates_out_a_free_coordinate():
    rng = random.Random(7)
    for _ in range(100):
        k = rng.randint(2, 6)
        a = [rng.randint(0, 4) for _ in range(rng.randint(0, k - 1))]
        beta = rng.randint(0, 4)
        assert monomial_simplex_integral(a, k, beta) == monomial_simplex_integral(
            a, k - 1, beta + 1
        ) / (beta + 1)


def test_integral_is_symmetric_under_permutation():
    assert monomial_simplex_integral([3, 1, 0], 3, 1) == monomial_simplex_integral([0, 1, 3], 3, 1)


def test_factorial_table_is_safe_under_threads():
    with ThreadPoolExecutor(max_workers=8) as executor:
        values = list(executor.map(factorial, range(300, 0, -7)))
    assert values == [math.factorial(n) for n in range(300, 0, -7)]


def test_enumerate_signatures_small_cases():
    assert [e.label for e in enumerate_signatures(2, "boundary-p2", 0)] == ["1"]
    labels = [e.label for e in enumerate_signatures(2, "boundary-p2", 2)]
    assert labels == ["1", "(1-P1)", "(1-P1)^2", "P2"]


def test_enumerate_signatures_k54_degree23():
    assert len(enumerate_signatures(54, BasisFamily.BOUNDARY_P2, 23)) == 156


def test_enumerate_signatures_are_nested_across_degrees():
    low = enumerate_signatures(3, "boundary-p2", 5)
    high = enumerate_signatures(3, "boundary-p2", 9)
    assert set(low) <= set(high)
    assert len(set(high)) == len(high)


def test_enumerate_boundary_even_small_cases():
    labels = [e.label for e in enumerate_signatures(2, "boundary-even", 2)]
    assert labels == ["1", "(1-P1)", "(1-P1)^2", "m(2)"]
    labels = [e.label for e in enumerate_signatures(3, "boundary-even", 4)]
    assert "(1-P1)^2*m(2)" in labels
    assert "m(2,2)" in labels
    assert "m(4)" in labels


def test_enumerate_boundary_even_k54_degree23():
    elements = enumerate_signatures(54, BasisFamily.BOUNDARY_EVEN, 23)
    assert len(elements) == 1236
    assert all(all(part % 2 == 0 for part in e.monomial) for e in elements)
    assert max(e.degree for e in elements) == 23


def test_enumerate_boundary_even_bounds_length_and_boundary_power():
    elements = enumerate_signatures(1, "boundary-even", 4)
    assert [(e.boundary_power, e.monomial) for e in elements] == [
        (0, ()),
        (1, ()),
        (0, (2,)),
        (1, (2,)),
        (0, (4,)),
    ]
    assert all(len(e.monomial) <= 2 for e in enumerate_signatures(2, "boundary-even", 8))


def test_enumerate_boundary_even_is_nested_across_degrees():
    low = enumerate_signatures(4, "boundary-even", 6)
    high = enumerate_signatures(4, "boundary-even", 10)
    assert high[: len(low)] == low
    assert len(set(high)) == len(high)


def test_boundary_even_element_is_monomial_times_boundary():
    element = BasisElement(family=BasisFamily.BOUNDARY_EVEN, monomial=(2, 0), boundary_power=1)
    assert element.monomial == (2,)
    value = evaluate(element_to_sympoly(element, 2), [0.1, 0.2])
    assert value == pytest.approx(0.7 * 0.05)
    element = BasisElement(family=BasisFamily.BOUNDARY_EVEN, monomial=(2, 2))
    assert evaluate(element_to_sympoly(element, 3), [0.1, 0.2, 0.3]) == pytest.approx(
        0.01 * 0.04 + 0.01 * 0.09 + 0.04 * 0.09
    )


def test_enumerate_signatures_power_sums_family():
    elements = enumerate_signatures(3, "power-sums", 3)
    # P1^a P2^b P3^c with a + 2b + 3c <= 3
    assert len(elements) == 7
    assert all(e.family is BasisFamily.POWER_SUMS for e in elements)


def test_enumerate_signatures_rejects_unknown_family():
    with pytest.raises(InvalidInputError):
        enumerate_signatures(2, "chebyshev", 3)


def test_sympoly_drops_zero_and_oversized_terms():
    p = SymPoly(
        k=2,
        terms={Signature(exponents=(1,)): 0, Signature(exponents=(1, 1, 1)): 3, Signature(): 2},
    )
    assert p.terms == {Signature(): Fraction(2)}


def test_monomial_product_of_linear_terms():
    # P1^2 = m_2 + 2 m_11
    assert monomial_product((1,), (1,)) == {(1, 1): 2, (2,): 1}


def test_expand_power_sum():
    expansion = expand_to_monomials(power_sum(2, 2))
    assert list(expansion) == [(2,)]
    assert expansion[(2,)].coefficient == 1
    assert expansion[(2,)].multiplicity == 2


def test_expand_boundary_factor():
    expansion = expand_to_monomials(boundary(2, 1))
    assert expansion[()].weight == 1
    assert expansion[(1,)].coefficient == -1
    assert expansion[(1,)].weight == -2


def test_expand_square_of_power_sum():
    expansion = expand_to_monomials(multiply(power_sum(3, 2), power_sum(3, 2)))
    assert expansion[(4,)].coefficient == 1
    assert expansion[(4,)].multiplicity == 3
    assert expansion[(2, 2)].coefficient == 2
    assert expansion[(2, 2)].multiplicity == 3


def test_expansion_integrates_to_the_same_value():
    p = multiply(boundary(3, 2), power_sum(3, 2))
    p = add(p, scale(power_sum(3, 1), Fraction(-3, 7)))
    total = sum(
        (cls.weight * monomial_simplex_integral(nu, 3) for nu, cls in expand_to_monomials(p).items()),
        Fraction(0),
    )
    assert total == integrate_sympoly(p)


def test_integrate_sympoly_examples():
    assert integrate_sympoly(constant(3)) == Fraction(1, 6)
    assert integrate_sympoly(power_sum(2, 1)) == Fraction(1, 3)
    for k in (1, 4, 9):
        for ell in (0, 1, 3):
            expected = Fraction(math.factorial(2 * ell), math.factorial(k + 2 * ell))
            assert integrate_sympoly(boundary(k, 2 * ell)) == expected


def test_integrate_sympoly_is_linear_and_squares_are_positive():
    p = multiply(boundary(4, 1), power_sum(4, 2))
    q = power_sum(4, 3)
    alpha = Fraction(-5, 3)
    assert integrate_sympoly(add(scale(p, alpha), q)) == alpha * integrate_sympoly(p) + integrate_sympoly(q)
    mixed = add(p, scale(q, -2))
    assert integrate_sympoly(multiply(mixed, mixed)) > 0


def test_integrate_out_last_preserves_the_integral():
    for element in enumerate_signatures(3, "power-sums", 4):
        p = element_to_sympoly(element, 3)
        inner = integrate_out_last(p)
        assert inner.k == 2
        assert integrate_sympoly(inner) == integrate_sympoly(p)


def test_integrate_out_last_one_variable():
    inner = integrate_out_last(constant(1))
    assert inner.k == 0
    assert integrate_sympoly(inner) == 1


def test_evaluate():
    assert evaluate(power_sum(2, 2), [0.1, 0.2]) == pytest.approx(0.05)
    element = BasisElement(family=BasisFamily.BOUNDARY_P2, powers=(2,), boundary_power=1)
    value = evaluate(element_to_sympoly(element, 2), [0.1, 0.2])
    assert value == pytest.approx(0.7 * 0.05)
