import os
from pathlib import Path
from typing import Optional, Type, TypeVar

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel

load_dotenv()  # Load environment variables from .env

PACKAGED_CONFIG = Path(__file__).resolve().parent.parent / "config.yml"

SettingsT = TypeVar("SettingsT", bound=BaseModel)


def config_hierarchy(env: Optional[str] = None) -> list[Path]:
    env = env or os.getenv("SIEVELAB_ENV", "development")
    return [
        Path("config.local.yml"),  # Local overrides (highest priority)
        Path(f"config.{env}.local.yml"),  # Environment-specific local overrides
        Path(f"config.{env}.yml"),  # Environment-specific config
        Path("config.yml"),  # Project configuration
        PACKAGED_CONFIG,  # Defaults shipped with the package (lowest priority)
    ]


def load_config(env: Optional[str] = None) -> dict:
    """Load configuration with environment-aware resolution similar to Vite"""
    config_paths = config_hierarchy(env)
    for path in config_paths:
        if path.exists():
            with open(path) as f:
                return yaml.safe_load(f) or {}

    raise FileNotFoundError(
        "No configuration file found in hierarchy: "
        + ", ".join(str(p) for p in config_paths)
    )


_config: Optional[dict] = None


def get_config() -> dict:
    global _config
    if _config is None:
        _config = load_config()
    return _config


def reset_config(config: Optional[dict] = None) -> None:
    """Drop the cached configuration, or pin it to ``config``."""
    global _config
    _config = config


def get_section(name: str, model: Type[SettingsT]) -> SettingsT:
    """Validate one top-level config section into its settings model."""
    return model(**(get_config().get(name) or {}))
