from .basis import element_to_sympoly, enumerate_signatures
from .integrals import expand_to_monomials, integrate_sympoly, monomial_simplex_integral

__all__ = [
    "element_to_sympoly",
    "enumerate_signatures",
    "expand_to_monomials",
    "integrate_sympoly",
    "monomial_simplex_integral",
]
