__version__ = "0.1.0"

from .engine import SieveLabEngine  # noqa: E402

__all__ = ["SieveLabEngine", "__version__"]
