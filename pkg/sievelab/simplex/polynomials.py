"""
Arithmetic on symmetric polynomials written as sums of m_lambda(t) (1 - P1)^beta.
"""

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Sequence, Tuple

from sympy.utilities.iterables import multiset_permutations, partitions

from sievelab.models.simplex_models import Signature, SymPoly

Partition = Tuple[int, ...]


@lru_cache(maxsize=None)
def partitions_of(n: int, max_parts: int) -> Tuple[Partition, ...]:
    """Partitions of n with at most max_parts parts, each sorted descending."""
    if n == 0:
        return ((),)
    if max_parts <= 0:
        return ()
    found = []
    for multiplicities in partitions(n, m=max_parts):
        parts = []
        for part, count in sorted(multiplicities.items(), reverse=True):
            parts.extend([part] * count)
        found.append(tuple(parts))
    return tuple(sorted(found, reverse=True))


def _sorted_parts(values) -> Partition:
    return tuple(sorted((v for v in values if v > 0), reverse=True))


@lru_cache(maxsize=None)
def monomial_product(lam: Partition, mu: Partition) -> Dict[Partition, int]:
    """
    m_lam * m_mu = sum_nu c_nu m_nu in enough variables for every nu to appear.

    c_nu counts the ways to split one fixed monomial t^nu as t^alpha t^beta
    with alpha an arrangement of lam and beta an arrangement of mu.
    """
    if not lam:
        return {mu: 1}
    if not mu:
        return {lam: 1}

    fixed = list(lam) + [0] * len(mu)
    candidates = {
        _sorted_parts(a + b for a, b in zip(fixed, beta))
        for beta in multiset_permutations(list(mu) + [0] * len(lam))
    }

    product = {}
    for nu in sorted(candidates):
        count = 0
        padded = list(lam) + [0] * (len(nu) - len(lam))
        for alpha in multiset_permutations(padded):
            rest = [n - a for n, a in zip(nu, alpha)]
            if min(rest) >= 0 and _sorted_parts(rest) == mu:
                count += 1
        if count:
            product[nu] = count
    return product


def add(p: SymPoly, q: SymPoly) -> SymPoly:
    if p.k != q.k:
        raise ValueError(f"dimension mismatch: {p.k} != {q.k}")
    terms = dict(p.terms)
    for sig, coeff in q.terms.items():
        terms[sig] = terms.get(sig, Fraction(0)) + coeff
    return SymPoly(k=p.k, terms=terms)


def scale(p: SymPoly, factor) -> SymPoly:
    factor = Fraction(factor)
    return SymPoly(k=p.k, terms={sig: coeff * factor for sig, coeff in p.terms.items()})


def multiply(p: SymPoly, q: SymPoly) -> SymPoly:
    if p.k != q.k:
        raise ValueError(f"dimension mismatch: {p.k} != {q.k}")
    terms: Dict[Signature, Fraction] = {}
    for sig_p, coeff_p in p.terms.items():
        for sig_q, coeff_q in q.terms.items():
            beta = sig_p.boundary_power + sig_q.boundary_power
            for nu, count in monomial_product(sig_p.exponents, sig_q.exponents).items():
                if len(nu) > p.k:
                    continue
                sig = Signature(exponents=nu, boundary_power=beta)
                terms[sig] = terms.get(sig, Fraction(0)) + coeff_p * coeff_q * count
    return SymPoly(k=p.k, terms=terms)


def constant(k: int, value=1) -> SymPoly:
    return SymPoly(k=k, terms={Signature(): Fraction(value)})


def evaluate(p: SymPoly, point: Sequence[float]) -> float:
    """Value of p at a point of R^k (no support check)."""
    if len(point) != p.k:
        raise ValueError(f"expected {p.k} coordinates, got {len(point)}")
    boundary = 1.0 - sum(point)
    total = 0.0
    for sig, coeff in p.terms.items():
        padded = list(sig.exponents) + [0] * (p.k - len(sig.exponents))
        monomial_sum = 0.0
        for alpha in multiset_permutations(padded) if padded else [[]]:
            value = 1.0
            for t, e in zip(point, alpha):
                value *= t**e
            monomial_sum += value
        total += float(coeff) * monomial_sum * boundary**sig.boundary_power
    return total


def integrate_out_last(p: SymPoly) -> SymPoly:
    """
    int_0^{1-s} p(t_1, .., t_k) dt_k with s = t_1 + .. + t_{k-1}, as a
    symmetric polynomial in k - 1 variables.

    m_lam(t) splits as m_lam(t') + sum over distinct parts e of t_k^e m_{lam - e}(t'),
    and int_0^{1-s} t^e (1-s-t)^beta dt = e! beta! / (e+beta+1)! (1-s)^(e+beta+1).
    """
    if p.k < 1:
        raise ValueError("nothing to integrate out of a zero-dimensional polynomial")
    terms: Dict[Signature, Fraction] = {}

    def accumulate(exponents, beta, value):
        sig = Signature(exponents=exponents, boundary_power=beta)
        terms[sig] = terms.get(sig, Fraction(0)) + value

    for sig, coeff in p.terms.items():
        lam, beta = sig.exponents, sig.boundary_power
        if len(lam) <= p.k - 1:
            accumulate(lam, beta + 1, coeff / (beta + 1))
        for e in Counter(lam):
            rest = list(lam)
            rest.remove(e)
            inner = Fraction(factorial(e) * factorial(beta), factorial(e + beta + 1))
            accumulate(tuple(rest), beta + e + 1, coeff * inner)
    return SymPoly(k=p.k - 1, terms=terms)
