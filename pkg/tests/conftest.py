import pytest

from crud.medium import build_grid
from schemas.propagation import PropagationConfig, PropagationMode
from schemas.system import AtomicSystem, DetuningPoint
from utils.presets import pritchard2010, pritchard2010_gaussian


@pytest.fixture
def preset_config():
    return pritchard2010()


@pytest.fixture
def gaussian_config():
    return pritchard2010_gaussian()


@pytest.fixture
def system(preset_config) -> AtomicSystem:
    return preset_config.system


@pytest.fixture
def medium(preset_config):
    return preset_config.medium


@pytest.fixture
def grid(system, medium):
    return build_grid(medium, system)


@pytest.fixture
def line_center(system) -> DetuningPoint:
    """Two-photon resonance, delta_2 = 0."""
    return DetuningPoint.at_two_photon(system, 0.0)


@pytest.fixture
def continuous() -> PropagationConfig:
    return PropagationConfig(mode=PropagationMode.CONTINUOUS)


@pytest.fixture
def stochastic() -> PropagationConfig:
    return PropagationConfig(mode=PropagationMode.STOCHASTIC, seed=12345)
