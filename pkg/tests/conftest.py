import os

import pytest
from metastability.functions import PwlFunction
from metastability.numerics import Caps

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

CAP_VARIABLES = (
    "METASTABILITY_CAP_BITS",
    "METASTABILITY_HORIZON",
    "METASTABILITY_SEARCH",
    "METASTABILITY_ITERATIONS",
)


@pytest.fixture
def identity() -> PwlFunction:
    return PwlFunction.identity()


@pytest.fixture
def reflection() -> PwlFunction:
    return PwlFunction.reflection()


@pytest.fixture
def tent() -> PwlFunction:
    return PwlFunction.tent()


@pytest.fixture
def small_caps() -> Caps:
    return Caps(nat_bits=256, horizon=2000, search=2000, iterations=10**5)


@pytest.fixture
def smoke_file() -> str:
    return os.path.join(DATA_DIR, "smoke.json")


@pytest.fixture
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in CAP_VARIABLES:
        monkeypatch.delenv(name, raising=False)
