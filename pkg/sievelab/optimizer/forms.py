"""
Assembly of the quadratic forms I (M2) and sum_l J_l (M1) on a symmetric basis.

The (1 - P1)^a P2^b family takes a closed-form path: every product integral
depends only on (A, B) = (a + a', b + b') and reduces to

    int_{R_k} (1 - P1)^A P2^B = A! S_k(B) / (k + A + 2B)!

with S_k(B) an integer sum over partitions of B.

The (1 - P1)^a m_alpha family has one too:

    int_{R_k} (1 - P1)^A m_alpha m_beta = A! W_k(alpha, beta) / (k + A + |alpha| + |beta|)!

where W_k sums prod (u_i + v_i)! over the monomials t^u of m_alpha and t^v of
m_beta. Placing the parts of alpha and beta in k slots, W_k only depends on
which parts share a slot, so it is a sum over partial matchings of the parts.

Other families go through the general SymPoly algebra.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, perm, prod
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_permutations
from tqdm import tqdm

from sievelab.config import get_config, get_section
from sievelab.errors import InvalidInputError
from sievelab.models.optimizer_models import FormPair
from sievelab.models.settings_models import OptimizerSettings
from sievelab.models.simplex_models import BasisElement, BasisFamily
from sievelab.simplex.basis import element_to_sympoly, enumerate_signatures, resolve_family
from sievelab.simplex.integrals import (
    factorial,
    integrate_sympoly,
    monomial_multiplicity,
    monomial_simplex_integral,
)
from sievelab.simplex.polynomials import integrate_out_last, multiply, partitions_of

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


@lru_cache(maxsize=None)
def p2_power_weight(k: int, b: int) -> int:
    """S_k(b) = sum over partitions lam of b (<= k parts) of b!/prod lam_i! * mult(lam, k) * prod (2 lam_i)!."""
    total = 0
    for lam in partitions_of(b, k):
        term = factorial(b) * monomial_multiplicity(lam, k)
        for part in lam:
            term = term * factorial(2 * part) // factorial(part)
        total += term
    return total


def boundary_p2_integral(k: int, a: int, b: int) -> Fraction:
    """int_{R_k} (1 - P1)^a P2^b dt."""
    return Fraction(factorial(a) * p2_power_weight(k, b), factorial(k + a + 2 * b))


def _p2_exponents(element: BasisElement) -> Tuple[int, int]:
    return element.boundary_power, len(element.powers)


def _boundary_p2_i_entry(k: int, left: BasisElement, right: BasisElement) -> Fraction:
    a, b = _p2_exponents(left)
    a2, b2 = _p2_exponents(right)
    return boundary_p2_integral(k, a + a2, b + b2)


def _boundary_p2_j_entry(k: int, left: BasisElement, right: BasisElement) -> Fraction:
    # inner integral over t_k of (1-s-t)^a (Q + t^2)^b is
    # sum_j C(b,j) (2j)! a! / (a+2j+1)! (1-s)^(a+2j+1) Q^(b-j)
    a, b = _p2_exponents(left)
    a2, b2 = _p2_exponents(right)
    total = 0
    for j, j2 in product(range(b + 1), range(b2 + 1)):
        e, e2 = a + 2 * j + 1, a2 + 2 * j2 + 1
        total += (
            comb(b, j)
            * comb(b2, j2)
            * factorial(2 * j)
            * factorial(2 * j2)
            * comb(e + e2, e)
            * p2_power_weight(k - 1, b - j + b2 - j2)
        )
    degree = a + a2 + 2 * b + 2 * b2
    return Fraction(k * factorial(a) * factorial(a2) * total, factorial(k + 1 + degree))


@lru_cache(maxsize=None)
def _matching_sums(alpha: Tuple[int, ...], beta: Tuple[int, ...]) -> Tuple[int, ...]:
    """
    S_m = sum over matchings of m labeled parts of alpha with m labeled parts
    of beta of prod C(x + y, x) over the matched pairs (x, y), for m = 0, 1, ...
    """
    values = sorted(set(beta))

    @lru_cache(maxsize=None)
    def walk(index: int, remaining: Tuple[int, ...]) -> Dict[int, int]:
        if index == len(alpha):
            return {0: 1}
        x = alpha[index]
        sums = dict(walk(index + 1, remaining))
        for slot, count in enumerate(remaining):
            if not count:
                continue
            weight = count * comb(x + values[slot], x)
            rest = remaining[:slot] + (count - 1,) + remaining[slot + 1 :]
            for m, s in walk(index + 1, rest).items():
                sums[m + 1] = sums.get(m + 1, 0) + weight * s
        return sums

    sums = walk(0, tuple(beta.count(y) for y in values))
    return tuple(sums.get(m, 0) for m in range(max(sums) + 1))


def _automorphisms(parts: Tuple[int, ...]) -> int:
    return prod(factorial(parts.count(v)) for v in set(parts))


@lru_cache(maxsize=None)
def _pair_weight(k: int, alpha: Tuple[int, ...], beta: Tuple[int, ...]) -> int:
    # m matched pairs occupy len(alpha) + len(beta) - m distinct slots
    placements = sum(
        perm(k, len(alpha) + len(beta) - m) * s for m, s in enumerate(_matching_sums(alpha, beta))
    )
    scale = prod(factorial(x) for x in alpha) * prod(factorial(y) for y in beta)
    return placements * scale // (_automorphisms(alpha) * _automorphisms(beta))


def monomial_pair_weight(k: int, alpha: Sequence[int], beta: Sequence[int]) -> int:
    """W_k(alpha, beta) = sum of prod (u_i + v_i)! over monomials t^u of m_alpha and t^v of m_beta."""
    if k < 0:
        raise InvalidInputError(f"k must be non-negative, got {k}")
    alpha = tuple(sorted((int(x) for x in alpha if x), reverse=True))
    beta = tuple(sorted((int(y) for y in beta if y), reverse=True))
    if beta < alpha:
        alpha, beta = beta, alpha
    return _pair_weight(k, alpha, beta)


def boundary_monomial_integral(
    k: int, a: int, alpha: Sequence[int], beta: Sequence[int] = ()
) -> Fraction:
    """int_{R_k} (1 - P1)^a m_alpha m_beta dt."""
    degree = k + a + sum(alpha) + sum(beta)
    return Fraction(factorial(a) * monomial_pair_weight(k, alpha, beta), factorial(degree))


def _peel(alpha: Tuple[int, ...]):
    """(e, rest) with m_alpha = sum_e t_k^e m_rest(t_1..t_{k-1})."""
    yield 0, alpha
    for e in sorted(set(alpha)):
        i = alpha.index(e)
        yield e, alpha[:i] + alpha[i + 1 :]


def _boundary_even_i_entry(k: int, left: BasisElement, right: BasisElement) -> Fraction:
    return boundary_monomial_integral(
        k, left.boundary_power + right.boundary_power, left.monomial, right.monomial
    )


def _boundary_even_j_entry(k: int, left: BasisElement, right: BasisElement) -> Fraction:
    # inner integral over t_k of (1-s-t)^a t^e is a! e! / (a+e+1)! (1-s)^(a+e+1)
    a, a2 = left.boundary_power, right.boundary_power
    total = 0
    for e, rest in _peel(left.monomial):
        for e2, rest2 in _peel(right.monomial):
            total += (
                factorial(e)
                * factorial(e2)
                * comb(a + e + a2 + e2 + 2, a + e + 1)
                * monomial_pair_weight(k - 1, rest, rest2)
            )
    degree = a + a2 + sum(left.monomial) + sum(right.monomial)
    return Fraction(k * factorial(a) * factorial(a2) * total, factorial(k + 1 + degree))


def _general_i_entry(k: int, left: BasisElement, right: BasisElement) -> Fraction:
    return integrate_sympoly(
        multiply(element_to_sympoly(left, k), element_to_sympoly(right, k))
    )


@lru_cache(maxsize=4096)
def _inner(element: BasisElement, k: int):
    return integrate_out_last(element_to_sympoly(element, k))


def _general_j_entry(k: int, left: BasisElement, right: BasisElement) -> Fraction:
    return k * integrate_sympoly(multiply(_inner(left, k), _inner(right, k)))


def _check_basis(basis: Sequence[BasisElement], k: int) -> None:
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")
    if not basis:
        raise InvalidInputError("basis is empty")


_CLOSED_FORMS = {
    BasisFamily.BOUNDARY_P2: (_boundary_p2_i_entry, _boundary_p2_j_entry),
    BasisFamily.BOUNDARY_EVEN: (_boundary_even_i_entry, _boundary_even_j_entry),
}


def _entries(basis: Sequence[BasisElement], closed_form: Optional[bool]):
    """(I entry, J entry) for the basis; closed forms when one family covers it."""
    families = {e.family for e in basis}
    closed = _CLOSED_FORMS.get(families.pop()) if len(families) == 1 else None
    if closed_form and closed is None:
        known = ", ".join(f.value for f in _CLOSED_FORMS)
        raise InvalidInputError(f"the closed-form path only covers a single family among: {known}")
    if closed is None or closed_form is False:
        return _general_i_entry, _general_j_entry
    return closed


def _assemble(entry, basis: Sequence[BasisElement], k: int, workers: int, desc: str) -> Matrix:
    size = len(basis)

    def build_row(i: int) -> List[Fraction]:
        return [entry(k, basis[i], basis[j]) for j in range(i, size)]

    show_progress = bool(get_config().get("progress", False))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(build_row, i) for i in range(size)]
        upper = [f.result() for f in tqdm(futures, desc=desc, unit="rows", disable=not show_progress)]

    matrix = [[Fraction(0)] * size for _ in range(size)]
    for i, row in enumerate(upper):
        for offset, value in enumerate(row):
            matrix[i][i + offset] = value
            matrix[i + offset][i] = value
    return matrix


def _workers(workers: Optional[int]) -> int:
    return workers or get_section("optimizer", OptimizerSettings).workers


def assemble_I_form(
    basis: Sequence[BasisElement],
    k: int,
    workers: Optional[int] = None,
    closed_form: Optional[bool] = None,
) -> Matrix:
    _check_basis(basis, k)
    entry = _entries(basis, closed_form)[0]
    return _assemble(entry, basis, k, _workers(workers), "Assembling I")


def assemble_J_form(
    basis: Sequence[BasisElement],
    k: int,
    workers: Optional[int] = None,
    closed_form: Optional[bool] = None,
) -> Matrix:
    _check_basis(basis, k)
    entry = _entries(basis, closed_form)[1]
    return _assemble(entry, basis, k, _workers(workers), "Assembling J")


def build_forms(
    k: int,
    family: Union[str, BasisFamily, None] = None,
    max_degree: Optional[int] = None,
    workers: Optional[int] = None,
) -> FormPair:
    settings = get_section("optimizer", OptimizerSettings)
    family = resolve_family(family or settings.family)
    max_degree = settings.max_degree if max_degree is None else max_degree
    basis = enumerate_signatures(k, family, max_degree)
    logger.info("Assembling %dx%d forms for k=%d, family=%s", len(basis), len(basis), k, family.value)
    return FormPair(
        k=k,
        family=family,
        max_degree=max_degree,
        basis=basis,
        m1=assemble_J_form(basis, k, workers),
        m2=assemble_I_form(basis, k, workers),
    )


# Dense, coordinate-by-coordinate evaluation ---------------------------------

Dense = Dict[Tuple[int, ...], Fraction]


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _dense_add(target: Dense, exponents: Tuple[int, ...], value: Fraction) -> None:
    target[exponents] = target.get(exponents, Fraction(0)) + value


def _dense_multiply(p: Dense, q: Dense) -> Dense:
    result: Dense = {}
    for ep, cp in p.items():
        for eq, cq in q.items():
            _dense_add(result, tuple(x + y for x, y in zip(ep, eq)), cp * cq)
    return result


def _dense_boundary_power(coordinates: Sequence[int], k: int, n: int) -> Dense:
    """(1 - sum_{i in coordinates} t_i)^n as a dense polynomial in k variables."""
    result: Dense = {}
    for j in range(n + 1):
        sign_binomial = comb(n, j) * (-1) ** j
        for alpha in _compositions(j, len(coordinates)):
            multinomial = factorial(j)
            for e in alpha:
                multinomial //= factorial(e)
            exponents = [0] * k
            for coordinate, e in zip(coordinates, alpha):
                exponents[coordinate] = e
            _dense_add(result, tuple(exponents), Fraction(sign_binomial * multinomial))
    return result


def _dense_element(element: BasisElement, k: int) -> Dense:
    poly = element_to_sympoly(element, k)
    result: Dense = {}
    for sig, coeff in poly.terms.items():
        padded = list(sig.exponents) + [0] * (k - len(sig.exponents))
        monomials: Dense = {}
        for alpha in multiset_permutations(padded) if padded else [[]]:
            _dense_add(monomials, tuple(alpha), coeff)
        boundary = _dense_boundary_power(range(k), k, sig.boundary_power)
        for exponents, value in _dense_multiply(monomials, boundary).items():
            _dense_add(result, exponents, value)
    return {e: c for e, c in result.items() if c != 0}


def _dense_integrate_out(p: Dense, k: int, coordinate: int) -> Dense:
    others = [i for i in range(k) if i != coordinate]
    result: Dense = {}
    for exponents, coeff in p.items():
        e = exponents[coordinate]
        rest = list(exponents)
        rest[coordinate] = 0
        boundary = _dense_boundary_power(others, k, e + 1)
        for b_exponents, b_coeff in boundary.items():
            combined = tuple(x + y for x, y in zip(rest, b_exponents))
            _dense_add(result, combined, coeff * b_coeff / (e + 1))
    return result


def direct_j_sum(basis: Sequence[BasisElement], k: int) -> Matrix:
    """
    sum_l J_l evaluated separately for every coordinate l on fully expanded
    polynomials, without using the symmetry of the basis. Small k only.
    """
    _check_basis(basis, k)
    dense = [_dense_element(element, k) for element in basis]
    size = len(basis)
    matrix = [[Fraction(0)] * size for _ in range(size)]
    for coordinate in range(k):
        inner = [_dense_integrate_out(p, k, coordinate) for p in dense]
        for i in range(size):
            for j in range(size):
                for exponents, coeff in _dense_multiply(inner[i], inner[j]).items():
                    reduced = [e for idx, e in enumerate(exponents) if idx != coordinate]
                    matrix[i][j] += coeff * monomial_simplex_integral(reduced, k - 1)
    return matrix
