from enum import Enum
from fractions import Fraction
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator


class BasisFamily(str, Enum):
    BOUNDARY_P2 = "boundary-p2"  # (1 - P1)^a * P2^b
    POWER_SUMS = "power-sums"  # P1^a * P2^b * P3^c
    BOUNDARY_EVEN = "boundary-even"  # (1 - P1)^a * m_alpha, every part of alpha even


class Signature(BaseModel):
    """Index of m_lambda(t) * (1 - P1)^beta, with m_lambda the monomial symmetric function."""

    model_config = ConfigDict(frozen=True)

    exponents: Tuple[int, ...] = Field(
        default=(), description="Nonzero monomial exponents, sorted descending"
    )
    boundary_power: int = Field(default=0, ge=0, description="Exponent of (1 - sum t_i)")

    @field_validator("exponents", mode="before")
    @classmethod
    def canonical_exponents(cls, value):
        parts = [int(e) for e in value]
        if any(e < 0 for e in parts):
            raise ValueError("exponents must be non-negative")
        return tuple(sorted((e for e in parts if e > 0), reverse=True))

    @property
    def degree(self) -> int:
        return sum(self.exponents) + self.boundary_power


class SymPoly(BaseModel):
    """Symmetric polynomial on the k-simplex as a combination of Signatures."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int = Field(ge=0, description="Number of variables; 0 is the one-point simplex")
    terms: Dict[Signature, Fraction] = Field(default_factory=dict)

    @field_validator("terms", mode="before")
    @classmethod
    def exact_coefficients(cls, value):
        return {sig: Fraction(coeff) for sig, coeff in dict(value).items()}

    @field_validator("terms")
    @classmethod
    def canonical_terms(cls, value, info: ValidationInfo):
        k = info.data.get("k", 0)
        # m_lambda vanishes identically once it has more parts than variables
        return {
            sig: coeff
            for sig, coeff in value.items()
            if coeff != 0 and len(sig.exponents) <= k
        }

    @property
    def degree(self) -> int:
        return max((sig.degree for sig in self.terms), default=0)


class BasisElement(BaseModel):
    """
    One generator of a basis family: a product of power sums P_j (one factor
    per entry of ``powers``) times the monomial symmetric function m_monomial
    times (1 - P1)^boundary_power.
    """

    model_config = ConfigDict(frozen=True)

    family: BasisFamily
    powers: Tuple[int, ...] = Field(default=(), description="Power-sum indices, descending")
    monomial: Tuple[int, ...] = Field(
        default=(), description="Exponents of the monomial symmetric factor, descending"
    )
    boundary_power: int = Field(default=0, ge=0)

    @field_validator("powers", "monomial", mode="before")
    @classmethod
    def sort_descending(cls, value):
        return tuple(sorted((int(j) for j in value if int(j) > 0), reverse=True))

    @property
    def degree(self) -> int:
        return sum(self.powers) + sum(self.monomial) + self.boundary_power

    @property
    def label(self) -> str:
        factors = []
        if self.boundary_power:
            factors.append(
                "(1-P1)" if self.boundary_power == 1 else f"(1-P1)^{self.boundary_power}"
            )
        for j in sorted(set(self.powers)):
            count = self.powers.count(j)
            factors.append(f"P{j}" if count == 1 else f"P{j}^{count}")
        if self.monomial:
            factors.append(f"m({','.join(str(e) for e in self.monomial)})")
        return "*".join(factors) or "1"


class MonomialClass(BaseModel):
    """All monomials t^alpha whose sorted exponent vector is one partition."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    coefficient: Fraction = Field(description="Coefficient of each single monomial")
    multiplicity: int = Field(ge=0, description="Number of distinct monomials in the class")

    @property
    def weight(self) -> Fraction:
        return self.coefficient * self.multiplicity
