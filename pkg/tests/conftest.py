import json
from pathlib import Path

import pytest

from netrisk import engine, model_io

REPO_ROOT = Path(__file__).resolve().parent.parent
MODEL_PATH = REPO_ROOT / "models" / "ab_valley.json"
SCENARIO_PATH = REPO_ROOT / "models" / "flood_protection.json"


@pytest.fixture(scope="session")
def model_bytes() -> bytes:
    return MODEL_PATH.read_bytes()


@pytest.fixture(scope="session")
def valley_model(model_bytes):
    result = model_io.load_model(model_bytes)
    assert result.ok, [d.render() for d in result.diagnostics]
    return result.model


@pytest.fixture(scope="session")
def valley_report(valley_model):
    return engine.evaluate(valley_model)


@pytest.fixture
def model_dict(model_bytes):
    """Fresh mutable copy of the bundled model for negative fixtures."""
    return json.loads(model_bytes)
