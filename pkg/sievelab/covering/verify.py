import logging
from typing import List, Optional

import numpy as np
from sympy import primefactors
from sympy.ntheory.modular import crt

from sievelab.errors import UnverifiedPlanError
from sievelab.models.covering_models import CoveringPlan, CoverReport, GapWitness, SurvivorSet
from sievelab.primes.sieve import primes_up_to

logger = logging.getLogger(__name__)


def _uncovered(plan: CoveringPlan, y: int) -> np.ndarray:
    remaining = np.arange(1, y + 1, dtype=np.int64)
    for p, a in sorted(plan.choices.items()):
        remaining = remaining[remaining % p != a]
    return remaining


def verify_cover(plan: CoveringPlan, y: Optional[int] = None) -> CoverReport:
    """Check every element of {1, .., y} (default plan.y) against the chosen classes."""
    uncovered = _uncovered(plan, plan.y if y is None else y)
    return CoverReport(covered=not len(uncovered), uncovered=uncovered.tolist())


def survivors(plan: CoveringPlan, primes: Optional[List[int]] = None) -> SurvivorSet:
    """Elements of {1, .., y} left uncovered by the classes of ``primes`` (default: all)."""
    partial = plan if primes is None else plan.model_copy(
        update={"choices": {p: plan.choices[p] for p in primes}, "stages": {}}
    )
    return SurvivorSet(y=plan.y, elements=_uncovered(partial, plan.y).tolist())


def survivor_characterization(x: int, y: int, z: float) -> List[int]:
    """n <= y with no prime factor in [z, x/3] and n - 1 free of prime factors below z."""
    found = []
    for n in range(1, y + 1):
        if n == 1:
            continue  # n - 1 = 0 is divisible by 2 < z
        if any(z <= p and 3 * p <= x for p in primefactors(n)):
            continue
        if any(p < z for p in primefactors(n - 1)):
            continue
        found.append(n)
    return found


def crt_witness(plan: CoveringPlan) -> GapWitness:
    """
    The least N > x with N = -a_p (mod p) for every chosen p. Each of
    N + 1, .., N + y then has a prime factor p <= x below itself.
    """
    report = verify_cover(plan)
    if not report.covered:
        raise UnverifiedPlanError(
            f"plan leaves {len(report.uncovered)} elements uncovered, first {report.uncovered[:10]}"
        )
    primes = sorted(plan.choices)
    residue, modulus = crt(primes, [(-plan.choices[p]) % p for p in primes])
    residue, modulus = int(residue), int(modulus)
    N = residue if residue > plan.x else residue + modulus * ((plan.x - residue) // modulus + 1)

    factors = []
    for m in range(1, plan.y + 1):
        factors.append(next(p for p in primes if m % p == plan.choices[p]))
    return GapWitness(N=N, x=plan.x, y=plan.y, factors=factors)


def verify_witness(witness: GapWitness) -> bool:
    """
    Re-check a witness without trusting its factor list: every N + m must be
    divisible by a prime <= x found by trial division, and exceed it.
    """
    small_primes = primes_up_to(witness.x).tolist()
    for m in range(1, witness.y + 1):
        value = witness.N + m
        divisor = next((p for p in small_primes if value % p == 0), None)
        if divisor is None or value <= divisor:
            return False
        recorded = witness.factors[m - 1]
        if value % recorded or value <= recorded:
            return False
    return True
