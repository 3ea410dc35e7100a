import pytest

from cfokey import ExperimentConfig
from cfokey.harness import build_calibration


@pytest.fixture(scope="session")
def default_config():
    return ExperimentConfig(seed=20240717)


@pytest.fixture(scope="session")
def calibration(default_config):
    """Waveform-calibrated error table shared across the suite (a few
    seconds to build; every surrogate experiment reuses it)."""
    return build_calibration(default_config)
