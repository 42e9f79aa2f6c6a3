"""
Largest generalized eigenpair of an exact symmetric pencil (M1, M2).

The exact forms are ill-conditioned (they are Gram matrices of nearly
collinear polynomials), so the reduction to an ordinary eigenproblem runs in
gmpy2 multiple precision at a precision that is doubled until the result
re-verifies exactly:

1. equilibrate both forms with a power-of-two diagonal D (exact);
2. Cholesky-factor the equilibrated M2 = L L^T at the working precision;
3. form C = L^-1 M1 L^-T and take its eigendecomposition with LAPACK;
4. refine the top eigenvector of C at the working precision, correcting it
   along the other float eigenvectors;
5. map back f = D L^-T y and recompute f^T M1 f / f^T M2 f in integers.

Matrices are numpy object arrays of mpfr, so the O(n^3) loops stay inside
numpy while every operation rounds at the working precision.
"""

import logging
from fractions import Fraction
from math import ceil, lcm, log2
from typing import List, NamedTuple, Sequence, Tuple

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpq
from scipy import linalg

from sievelab.errors import ConvergenceError, LinearlyDependentBasisError

logger = logging.getLogger(__name__)

# Rayleigh quotient of the rationalized vector may trail lambda by at most this
EXACT_AGREEMENT = 1e-9
POLISH_STEPS = 3


class Eigenpair(NamedTuple):
    eigenvalue: Fraction  # exact value of the working-precision lambda
    f: List[Fraction]
    exact_ratio: Fraction
    residual: float
    digits: int


class _FactorizationFailed(Exception):
    pass


def rationalize(value) -> Fraction:
    """Exact rational value of a binary floating-point number, sign included."""
    numerator, denominator = value.as_integer_ratio()
    return Fraction(int(numerator), int(denominator))


def _equilibration_shifts(m2: Sequence[Sequence[Fraction]]) -> List[int]:
    shifts = []
    for i, row in enumerate(m2):
        d = row[i]
        if d <= 0:
            raise LinearlyDependentBasisError(f"M2 has non-positive diagonal entry at {i}")
        log2_d = d.numerator.bit_length() - d.denominator.bit_length()
        shifts.append(-(log2_d // 2))
    return shifts


def _to_mpfr(matrix, shifts) -> np.ndarray:
    """D M D at the working precision; powers of two scale exactly."""
    n = len(matrix)
    powers = {s: mpfr(2) ** s for s in {a + b for a in shifts for b in shifts}}
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(i, n):
            v = matrix[i][j]
            out[i, j] = out[j, i] = mpfr(mpq(v.numerator, v.denominator)) * powers[
                shifts[i] + shifts[j]
            ]
    return out


def _dot(x, y):
    return x.dot(y) if len(x) else mpfr(0)


def _norm(v):
    return gmpy2.sqrt(_dot(v, v))


def _cholesky(a: np.ndarray, bits: int) -> np.ndarray:
    n = a.shape[0]
    floor = mpfr(2) ** (-(3 * bits) // 4)
    L = np.full((n, n), mpfr(0), dtype=object)
    for j in range(n):
        row = L[j, :j]
        pivot = a[j, j] - _dot(row, row)
        if pivot <= floor * a[j, j]:
            raise _FactorizationFailed(f"pivot {j} vanished at {bits} bits")
        L[j, j] = gmpy2.sqrt(pivot)
        if j + 1 < n:
            below = a[j + 1 :, j] - L[j + 1 :, :j].dot(row) if j else a[j + 1 :, j]
            L[j + 1 :, j] = below / L[j, j]
    return L


def _forward(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve L X = B for a vector or for every column of a matrix."""
    x = np.empty_like(b)
    for i in range(L.shape[0]):
        rest = b[i] - L[i, :i].dot(x[:i]) if i else b[i]
        x[i] = rest / L[i, i]
    return x


def _backward_transposed(L: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve L^T z = y."""
    n = L.shape[0]
    z = np.empty(n, dtype=object)
    for i in reversed(range(n)):
        tail = L[i + 1 :, i].dot(z[i + 1 :]) if i + 1 < n else 0
        z[i] = (y[i] - tail) / L[i, i]
    return z


def _reduce(a1: np.ndarray, L: np.ndarray) -> np.ndarray:
    """C = L^-1 A1 L^-T, symmetrized."""
    x = _forward(L, a1)
    c = _forward(L, np.ascontiguousarray(x.T))
    return (c + c.T) / 2


def _rayleigh(c, y):
    return _dot(y, c.dot(y)) / _dot(y, y)


def _to_float(v: np.ndarray) -> np.ndarray:
    return np.array([float(x) for x in v], dtype=np.float64)


def _refine(c: np.ndarray, tolerance: float):
    """Top eigenpair of C: LAPACK start, then corrections solved in the float eigenbasis."""
    n = c.shape[0]
    w, vectors = linalg.eigh(c.astype(np.float64))
    start = vectors[:, -1]
    if start[int(np.argmax(np.abs(start)))] < 0:
        start = -start
    y = np.array([mpfr(float(v)) for v in start], dtype=object)
    lam = _rayleigh(c, y)
    for _ in range(POLISH_STEPS):
        r = c.dot(y) - y * lam
        if _norm(r) / _norm(y) <= tolerance or n == 1:
            break
        projected = vectors[:, :-1].T @ _to_float(r)
        gaps = float(lam) - w[:-1]
        delta = vectors[:, :-1] @ (projected / gaps)
        y = y + np.array([mpfr(float(v)) for v in delta], dtype=object)
        lam = _rayleigh(c, y)
    return y, lam


def _residual(a1, a2, z, lam):
    r = a1.dot(z) - a2.dot(z) * lam
    return _norm(r) / _norm(z)


def _integer_form(matrix) -> Tuple[List[List[int]], int]:
    denominator = 1
    for row in matrix:
        for v in row:
            denominator = lcm(denominator, v.denominator)
    return [[v.numerator * (denominator // v.denominator) for v in row] for row in matrix], denominator


def exact_rayleigh_quotient(
    m1: Sequence[Sequence[Fraction]],
    m2: Sequence[Sequence[Fraction]],
    f: Sequence[Fraction],
) -> Fraction:
    """f^T M1 f / f^T M2 f in exact arithmetic."""
    common = 1
    for v in f:
        common = lcm(common, v.denominator)
    integer_f = [v.numerator * (common // v.denominator) for v in f]

    def quadratic(matrix):
        integer_matrix, denominator = _integer_form(matrix)
        total = sum(
            fi * sum(mij * fj for mij, fj in zip(row, integer_f))
            for fi, row in zip(integer_f, integer_matrix)
        )
        return total, denominator

    top, top_den = quadratic(m1)
    bottom, bottom_den = quadratic(m2)
    if bottom <= 0:
        raise LinearlyDependentBasisError("f^T M2 f is not positive")
    return Fraction(top * bottom_den, bottom * top_den)


def _bits(digits: int) -> int:
    return ceil(digits * log2(10)) + 16


def _attempt(m1, m2, tolerance: float, digits: int) -> Tuple[Eigenpair, float]:
    bits = _bits(digits)
    with gmpy2.context(precision=bits):
        shifts = _equilibration_shifts(m2)
        a1 = _to_mpfr(m1, shifts)
        a2 = _to_mpfr(m2, shifts)
        L = _cholesky(a2, bits)
        c = _reduce(a1, L)
        y, lam = _refine(c, tolerance / (10 * len(c)))

        z = _backward_transposed(L, y)
        residual = _residual(a1, a2, z, lam)
        f = [rationalize(v) * Fraction(2) ** shift for v, shift in zip(z, shifts)]
        eigenvalue = rationalize(lam)
    exact = exact_rayleigh_quotient(m1, m2, f)
    gap = abs(float(exact - eigenvalue))
    return Eigenpair(
        eigenvalue=eigenvalue,
        f=f,
        exact_ratio=exact,
        residual=float(residual),
        digits=digits,
    ), gap


def largest_generalized_eigenpair(
    m1: Sequence[Sequence[Fraction]],
    m2: Sequence[Sequence[Fraction]],
    tolerance: float,
    initial_digits: int = 60,
    max_digits: int = 1200,
) -> Eigenpair:
    """
    Deterministic in its inputs. Raises LinearlyDependentBasisError when M2
    does not factor even at max_digits, ConvergenceError when the residual or
    the exact re-check still fails there.
    """
    digits = initial_digits
    while True:
        try:
            pair, gap = _attempt(m1, m2, tolerance, digits)
        except _FactorizationFailed as e:
            if digits >= max_digits:
                raise LinearlyDependentBasisError(
                    f"M2 is not positive definite at {digits} digits; basis is linearly dependent"
                ) from e
            logger.info("Cholesky failed at %d digits, retrying", digits)
        else:
            if pair.residual <= tolerance and gap <= EXACT_AGREEMENT:
                return pair
            if digits >= max_digits:
                raise ConvergenceError(
                    f"residual {pair.residual:.3e} / exact gap {gap:.3e} still above "
                    f"contract at {digits} digits"
                )
            logger.info(
                "Residual %.3e, exact gap %.3e at %d digits, retrying", pair.residual, gap, digits
            )
        digits = min(2 * digits, max_digits)
