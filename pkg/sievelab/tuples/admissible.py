import json
import logging
from pathlib import Path
from typing import List, Sequence, Union

from sympy import primefactors

from sievelab.errors import InvalidInputError
from sievelab.models.tuple_models import AdmissibilityReport, AdmissibleTuple, LinearSystem
from sievelab.primes.sieve import primes_up_to

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / "data"


def _check_increasing(shifts: Sequence[int]) -> None:
    if any(b <= a for a, b in zip(shifts, shifts[1:])):
        raise InvalidInputError(f"shifts must be strictly increasing: {list(shifts)}")


def is_admissible(shifts: Sequence[int]) -> AdmissibilityReport:
    """
    A tuple is admissible when, for every prime p <= k, some residue class
    mod p contains no shift. Larger primes never need checking since k shifts
    cannot fill p > k classes. Witnesses map p to the smallest omitted residue.
    """
    shifts = [int(h) for h in shifts]
    _check_increasing(shifts)
    witnesses = {}
    for p in primes_up_to(len(shifts)).tolist():
        occupied = {h % p for h in shifts}
        free = [r for r in range(p) if r not in occupied]
        if not free:
            return AdmissibilityReport(admissible=False, witnesses=witnesses, covering_prime=p)
        witnesses[p] = free[0]
    return AdmissibilityReport(admissible=True, witnesses=witnesses)


def system_is_admissible(system: LinearSystem) -> AdmissibilityReport:
    """
    For L_i(n) = a_i n + b_i, look for n_p with prod L_i(n_p) coprime to p at
    every prime p <= k and every prime dividing some a_i. Witnesses are n_p.
    """
    k = len(system.functions)
    candidates = set(primes_up_to(k).tolist())
    for a, _ in system.functions:
        candidates.update(primefactors(a))

    witnesses = {}
    for p in sorted(candidates):
        found = next(
            (n for n in range(p) if all((a * n + b) % p for a, b in system.functions)), None
        )
        if found is None:
            return AdmissibilityReport(admissible=False, witnesses=witnesses, covering_prime=p)
        witnesses[p] = found
    return AdmissibilityReport(admissible=True, witnesses=witnesses)


def make_tuple(shifts: Sequence[int]) -> AdmissibleTuple:
    """Canonicalize and attach witnesses; raises if the shifts are not admissible."""
    report = is_admissible(shifts)
    if not report.admissible:
        raise InvalidInputError(
            f"shifts cover every residue mod {report.covering_prime}: {list(shifts)}"
        )
    canonical = AdmissibleTuple(shifts=shifts)
    offset = int(shifts[0])
    return canonical.model_copy(
        update={"witnesses": {p: (r - offset) % p for p, r in report.witnesses.items()}}
    )


def first_primes_after(m: int, count: int) -> List[int]:
    limit = max(2 * m, 64)
    while True:
        primes = [p for p in primes_up_to(limit).tolist() if p > m]
        if len(primes) >= count:
            return primes[:count]
        limit *= 2


def primes_after_k_tuple(k: int) -> AdmissibleTuple:
    """The first k primes greater than k, translated to start at 0."""
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")
    return make_tuple(first_primes_after(k, k))


def load_tuple_file(path: Union[str, Path]) -> List[int]:
    """
    Shifts from a JSON file holding either an array or an object with a
    ``shifts`` array. Bare names are also looked up in the packaged data.
    """
    path = Path(path)
    if not path.exists() and (DATA_DIR / path.name).exists():
        path = DATA_DIR / path.name
    if not path.exists():
        raise InvalidInputError(f"tuple file not found: {path}")
    with open(path) as f:
        data = json.load(f)
    shifts = data["shifts"] if isinstance(data, dict) else data
    return [int(h) for h in shifts]


def stored_tuple(k: int):
    """The packaged tuple for k, if one ships with the package."""
    path = DATA_DIR / f"tuple{k}.json"
    if not path.exists():
        return None
    return make_tuple(load_tuple_file(path))
