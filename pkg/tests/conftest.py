import json

import pytest

from app.components.core_types import Method, default_grid, initial_state, make_grid
from app.services.integrator import evolve


@pytest.fixture(scope="session")
def grid():
    return default_grid()


@pytest.fixture(scope="session")
def wide_grid():
    """Same spacing as the default grid, far enough out that nothing reaches the boundary by t = 1."""
    return make_grid(-16.0, 16.0, 2048)


@pytest.fixture(scope="session")
def spectral_t1(grid):
    """Default grid, default dt, t = 1."""
    return evolve(initial_state(grid), 1.0, 1e-4, 3.0, Method.SPECTRAL)


@pytest.fixture(scope="session")
def implicit_t1(grid):
    return evolve(initial_state(grid), 1.0, 1e-3, 3.0, Method.IMPLICIT)


@pytest.fixture(scope="session")
def wide_spectral_t1(wide_grid):
    return evolve(initial_state(wide_grid), 1.0, 1e-3, 3.0, Method.SPECTRAL)


@pytest.fixture
def write_config(tmp_path):
    """Write a config document and return its path."""

    def _write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data, indent=2), encoding="utf-8")
        return path

    return _write
