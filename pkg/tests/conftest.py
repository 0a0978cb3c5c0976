import math

import numpy as np
import pytest

from ggkp.config import settings
from ggkp.gaussian.schema import GaussianState
from ggkp.torus.schema import TorusGeometry


@pytest.fixture(autouse=True)
def restore_settings():
    """The CLI reloads the shared settings from the environment; undo that."""
    snapshot = settings.model_dump()
    yield
    for name, value in snapshot.items():
        setattr(settings, name, value)


@pytest.fixture
def square() -> TorusGeometry:
    """L = P = 2π, ħ = 1: α₀ = β₀ = 1 and θ₀ = 1/(2π)."""
    return TorusGeometry(L=2.0 * math.pi, P=2.0 * math.pi)


@pytest.fixture
def vacuum() -> GaussianState:
    return GaussianState.vacuum(1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
