"""
Base class for covering strategies.
"""

from abc import ABC, abstractmethod
from typing import Optional

from sievelab.models.covering_models import PlanReport, StrategyType


class BaseStrategy(ABC):
    def __init__(self, x: int, y: int, z: Optional[float] = None, seed: Optional[int] = None):
        self.x = x
        self.y = y
        self.z = z
        self.seed = seed

    @abstractmethod
    def validate_params(self) -> bool:
        """Check x, y and the strategy-specific parameters"""
        pass

    @abstractmethod
    def build(self) -> PlanReport:
        """Choose a residue class for every prime <= x"""
        pass

    @classmethod
    @abstractmethod
    def get_strategy_type(cls) -> StrategyType:
        """Return the strategy this class implements"""
        pass
