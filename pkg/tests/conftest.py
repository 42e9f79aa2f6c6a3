import pytest

from sievelab.config import load_config, reset_config


@pytest.fixture(autouse=True)
def packaged_config():
    """Every test starts from the packaged defaults with progress bars off."""
    config = load_config()
    config["progress"] = False
    config["storage"] = {"enabled": False}
    reset_config(config)
    yield config
    reset_config()


@pytest.fixture
def override_config(packaged_config):
    def apply(section: str, **values):
        packaged_config[section] = {**(packaged_config.get(section) or {}), **values}
        reset_config(packaged_config)

    return apply
