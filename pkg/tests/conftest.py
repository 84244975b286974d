import numpy as np
import pytest

from chsbattery import ModelParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_params(**kwargs) -> ModelParams:
    """Paper-style defaults unless overridden."""
    return ModelParams(**kwargs)


@pytest.fixture
def small_params() -> ModelParams:
    return ModelParams(n_spins=3, n_ph=12)
