"""
Exact integration over the unit simplex R_k = {t in [0, inf)^k : sum t_i <= 1}.

Everything rests on the Dirichlet integral

    int_{R_k} prod t_i^{a_i} (1 - sum t_i)^beta dt = beta! prod a_i! / (k + beta + sum a_i)!

evaluated in exact rational arithmetic.
"""

import threading
from collections import Counter
from fractions import Fraction
from math import comb
from typing import Dict, Sequence, Tuple

from sievelab.errors import InvalidInputError
from sievelab.models.simplex_models import MonomialClass, Signature, SymPoly
from sievelab.simplex.polynomials import monomial_product, partitions_of

_factorials = [1]
_factorial_lock = threading.Lock()


def factorial(n: int) -> int:
    """n! from a shared append-only table."""
    if n < 0:
        raise InvalidInputError(f"factorial of negative number {n}")
    if n < len(_factorials):
        return _factorials[n]
    with _factorial_lock:
        while len(_factorials) <= n:
            _factorials.append(_factorials[-1] * len(_factorials))
    return _factorials[n]


def monomial_simplex_integral(a: Sequence[int], k: int, beta: int = 0) -> Fraction:
    if k < 0 or beta < 0 or any(e < 0 for e in a):
        raise InvalidInputError("dimension, exponents and beta must be non-negative")
    if len(a) > k:
        raise InvalidInputError(f"{len(a)} exponents do not fit in dimension {k}")
    numerator = factorial(beta)
    for e in a:
        numerator *= factorial(e)
    return Fraction(numerator, factorial(k + beta + sum(a)))


def monomial_multiplicity(exponents: Tuple[int, ...], k: int) -> int:
    """Number of distinct monomials t^alpha in k variables with sorted(alpha) = exponents."""
    parts = [e for e in exponents if e > 0]
    if len(parts) > k:
        return 0
    count = factorial(k) // factorial(k - len(parts))
    for repeat in Counter(parts).values():
        count //= factorial(repeat)
    return count


def signature_integral(signature: Signature, k: int) -> Fraction:
    """Integral of m_lambda(t) (1 - P1)^beta over R_k."""
    multiplicity = monomial_multiplicity(signature.exponents, k)
    if multiplicity == 0:
        return Fraction(0)
    return multiplicity * monomial_simplex_integral(
        signature.exponents, k, signature.boundary_power
    )


def integrate_sympoly(p: SymPoly) -> Fraction:
    return sum(
        (coeff * signature_integral(sig, p.k) for sig, coeff in p.terms.items()),
        Fraction(0),
    )


def expand_to_monomials(p: SymPoly) -> Dict[Tuple[int, ...], MonomialClass]:
    """
    Expand every (1 - P1)^beta factor, returning one MonomialClass per sorted
    exponent vector. Integrating each class as weight * single-monomial integral
    reproduces integrate_sympoly(p).
    """
    coefficients: Dict[Tuple[int, ...], Fraction] = {}
    for sig, coeff in p.terms.items():
        beta = sig.boundary_power
        for j in range(beta + 1):
            # (1 - P1)^beta = sum_j C(beta, j) (-1)^j P1^j
            sign_binomial = comb(beta, j) * (-1) ** j
            for rho in partitions_of(j, p.k):
                multinomial = factorial(j)
                for part in rho:
                    multinomial //= factorial(part)
                for nu, count in monomial_product(rho, sig.exponents).items():
                    if len(nu) > p.k:
                        continue
                    coefficients[nu] = (
                        coefficients.get(nu, Fraction(0))
                        + coeff * sign_binomial * multinomial * count
                    )
    return {
        nu: MonomialClass(coefficient=c, multiplicity=monomial_multiplicity(nu, p.k))
        for nu, c in sorted(coefficients.items())
        if c != 0
    }
