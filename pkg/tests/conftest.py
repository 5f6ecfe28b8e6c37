"""Configuration for the pytest test suite."""

from __future__ import annotations

import pytest

from prm_weights.config import CONFIG_ENV_VAR, WorkbenchConfig, load_config
from prm_weights.gf import FieldSpec, field_of_order


@pytest.fixture(autouse=True)
def _no_config_file(monkeypatch: pytest.MonkeyPatch) -> None:
    """Ignore any configuration file set in the environment."""
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)


@pytest.fixture
def gf2() -> FieldSpec:
    """Return the field with 2 elements."""
    return field_of_order(2)


@pytest.fixture
def gf3() -> FieldSpec:
    """Return the field with 3 elements."""
    return field_of_order(3)


@pytest.fixture
def gf4() -> FieldSpec:
    """Return the field with 4 elements, built on x^2 + x + 1."""
    return field_of_order(4)


@pytest.fixture
def gf5() -> FieldSpec:
    """Return the field with 5 elements."""
    return field_of_order(5)


@pytest.fixture
def config() -> WorkbenchConfig:
    """Return a configuration with a small enumeration budget."""
    return load_config(budget=2**20, samples=200)
