"""
Exception hierarchy shared by every sievelab module.
"""

from typing import Any, Optional


class SieveLabError(Exception):
    """Base class for all sievelab failures."""


class InvalidInputError(SieveLabError, ValueError):
    """A pre-condition on the inputs of an operation does not hold."""


class BudgetExceededError(SieveLabError):
    def __init__(self, message: str, best: Optional[Any] = None):
        super().__init__(message)
        self.best = best


class LinearlyDependentBasisError(SieveLabError):
    """M2 could not be factored, so the basis spans a degenerate subspace."""


class ConvergenceError(SieveLabError):
    pass


class SearchExhaustedError(SieveLabError):
    def __init__(self, message: str, log: Optional[list] = None):
        super().__init__(message)
        self.log = log or []


class UnverifiedPlanError(SieveLabError, ValueError):
    pass


class InsufficientSamplesError(SieveLabError):
    pass
