from .config import get_config, get_section, load_config, reset_config

__all__ = ["get_config", "get_section", "load_config", "reset_config"]
