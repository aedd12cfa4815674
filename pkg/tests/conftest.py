import pytest

from src.engine.rules import initial_state
from src.helm.domain import DecisionDomain
from src.models.game import FieldSpec
from src.models.settings import SimulationSettings


@pytest.fixture
def field():
    return FieldSpec()


@pytest.fixture
def settings():
    return SimulationSettings()


@pytest.fixture
def domain():
    return DecisionDomain()


@pytest.fixture
def world(field):
    """Initial 2-v-2 game: everyone at home, flags home, t = 0"""
    return initial_state(field, 2)
