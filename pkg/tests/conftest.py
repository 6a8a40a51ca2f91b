# tests/conftest.py

import pytest

from src.config import reset_config
from src.linear.linear_block import LinearBlock
from src.nonlinearities.catalog import make_nonlinearity
from src.prediction.loop import LoopSpec
from src.spec.oscillator_spec import OscillatorSpec
from src.spec.presets import presets

TAU_F = 2.5e-4
TAU_S = 1e-3


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """Cada prueba parte de la configuración por defecto, sin archivo"""
    monkeypatch.delenv("OSCDF_CONFIG", raising=False)
    reset_config(None)
    yield
    reset_config(None)


@pytest.fixture
def relaxation_block():
    return LinearBlock([1.0, TAU_S], [1.0, TAU_F, TAU_F * TAU_S])


@pytest.fixture
def tank_block():
    return LinearBlock([0.0, TAU_S], [1.0, 0.0, TAU_F * TAU_S])


@pytest.fixture
def relaxation_loop(relaxation_block):
    nl = make_nonlinearity("tanh_relaxation", {"k1": 2.0, "k2": 6.25, "k3": 0.4})
    return LoopSpec(relaxation_block, nl, sign=1)


def preset_spec(name: str) -> OscillatorSpec:
    return OscillatorSpec.from_dict(presets.get(name), origin=name)


@pytest.fixture
def spec_of():
    return preset_spec
