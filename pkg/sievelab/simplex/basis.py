from functools import lru_cache
from typing import List, Union

from sievelab.errors import InvalidInputError
from sievelab.models.simplex_models import BasisElement, BasisFamily, Signature, SymPoly
from sievelab.simplex.polynomials import multiply, partitions_of

# Power sums P_j each family multiplies together
_FAMILY_PARTS = {
    BasisFamily.BOUNDARY_P2: (2,),
    BasisFamily.POWER_SUMS: (1, 2, 3),
}


def resolve_family(family: Union[str, BasisFamily]) -> BasisFamily:
    try:
        return BasisFamily(family)
    except ValueError:
        known = ", ".join(f.value for f in BasisFamily)
        raise InvalidInputError(f"Unknown basis family '{family}' (known: {known})")


def enumerate_signatures(
    k: int, generators: Union[str, BasisFamily], max_degree: int
) -> List[BasisElement]:
    """
    All basis elements of a family with weighted degree <= max_degree, ordered
    by degree and then lexicographically, so lower-degree bases are prefixes.

    boundary-even keeps (1 - P1)^a m_alpha only when alpha fits in k variables
    and a < 2^k: P1 has degree 2^k over the even symmetric functions, so the
    kept elements are linearly independent.
    """
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")
    if max_degree < 0:
        raise InvalidInputError(f"max_degree must be non-negative, got {max_degree}")
    family = resolve_family(generators)
    if family is BasisFamily.BOUNDARY_EVEN:
        return _boundary_even(k, max_degree)
    allowed = _FAMILY_PARTS[family]

    elements = []
    for weight in range(max_degree + 1):
        for powers in partitions_of(weight, weight):
            if any(j not in allowed for j in powers):
                continue
            if family is BasisFamily.BOUNDARY_P2:
                for a in range(max_degree - weight + 1):
                    elements.append(
                        BasisElement(family=family, powers=powers, boundary_power=a)
                    )
            else:
                elements.append(BasisElement(family=family, powers=powers))
    return sorted(elements, key=_order)


def _order(element: BasisElement):
    return element.degree, element.powers, element.monomial


def _boundary_even(k: int, max_degree: int) -> List[BasisElement]:
    elements = []
    for half in range(max_degree // 2 + 1):
        for lam in partitions_of(half, k):
            alpha = tuple(2 * part for part in lam)
            top = min(max_degree - 2 * half, 2**k - 1)
            for a in range(top + 1):
                elements.append(
                    BasisElement(family=BasisFamily.BOUNDARY_EVEN, monomial=alpha, boundary_power=a)
                )
    return sorted(elements, key=_order)


@lru_cache(maxsize=4096)
def element_to_sympoly(element: BasisElement, k: int) -> SymPoly:
    poly = SymPoly(
        k=k,
        terms={Signature(exponents=element.monomial, boundary_power=element.boundary_power): 1},
    )
    for j in element.powers:
        poly = multiply(poly, SymPoly(k=k, terms={Signature(exponents=(j,)): 1}))
    return poly
