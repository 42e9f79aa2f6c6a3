from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from sievelab import __version__


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RunConfig(BaseModel):
    """Fully resolved invocation, echoed as the header of every output document."""

    model_config = ConfigDict(extra="forbid")

    command: str
    action: Optional[str] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    format: OutputFormat = OutputFormat.JSON
    out: Optional[str] = None
    threads: int = Field(default=1, ge=1)
    version: str = __version__
