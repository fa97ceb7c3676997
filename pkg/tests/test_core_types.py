import numpy as np
import pytest

from app.components.core_types import (
    Branch,
    SpinorField,
    initial_state,
    l2_distance,
    linear_potential,
    make_grid,
    mirror_deviation,
    observables,
)
from app.utils.exceptions import CorruptStateError, InvalidParameter


@pytest.mark.parametrize(
    "z_min, z_max, n_points",
    [
        (-8, 8, 1000),
        (-8, 8, 4),
        (-8, 7, 1024),
        (8, -8, 1024),
        (0, 0, 1024),
        (-8, 8, True),
        (-8, 8, 1024.0),
        (-np.inf, np.inf, 1024),
    ],
)
def test_make_grid_rejects_invalid_parameters(z_min, z_max, n_points):
    with pytest.raises(InvalidParameter):
        make_grid(z_min, z_max, n_points)


def test_default_grid_layout(grid):
    assert grid.n_points == 1024
    assert grid.dz == 1 / 64
    assert grid.z[0] == -8.0
    assert grid.z[512] == 0.0
    assert grid.z[-1] == 8.0 - 1 / 64
    assert grid.wavenumbers[1] == pytest.approx(2 * np.pi / 16)


def test_grid_arrays_are_read_only(grid):
    with pytest.raises(ValueError):
        grid.z[0] = 1.0


def test_mirror_index_reflects_grid(grid):
    mirrored = grid.z[grid.mirror_index]
    np.testing.assert_array_equal(mirrored[1:], -grid.z[1:])
    assert grid.mirror_index[0] == 0


def test_initial_state_is_normalized_and_symmetric(grid):
    state = initial_state(grid)

    norm_plus, norm_minus = state.norms()
    assert norm_plus == pytest.approx(1.0, abs=1e-12)
    assert norm_minus == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_array_equal(state.psi_plus, state.psi_minus)
    assert np.abs(state.psi_plus[512]) ** 2 == pytest.approx(np.sqrt(2 / np.pi), abs=1e-12)
    assert mirror_deviation(state) == 0.0


def test_spinor_field_copies_and_freezes_input(grid):
    psi = np.ones(grid.n_points, dtype=complex)
    state = SpinorField(grid, psi, psi, 0.5)
    psi[0] = 7.0

    assert state.psi_plus[0] == 1.0
    assert state.time == 0.5
    with pytest.raises(ValueError):
        state.psi_minus[0] = 2.0


def test_spinor_field_rejects_wrong_shape(grid):
    with pytest.raises(InvalidParameter):
        SpinorField(grid, np.zeros(10), np.zeros(grid.n_points))


def test_linear_potential_is_mirrored_and_zero_at_seam(grid):
    plus = linear_potential(grid, 3.0, Branch.PLUS)
    minus = linear_potential(grid, 3.0, Branch.MINUS)

    assert plus[0] == 0.0
    np.testing.assert_allclose(plus[1:], -3.0 * grid.z[1:])
    np.testing.assert_array_equal(minus, -plus)
    np.testing.assert_array_equal(minus[grid.mirror_index], plus)


def test_observables_of_initial_state(grid):
    obs = observables(initial_state(grid))

    assert obs.mean_z_plus == pytest.approx(0.0, abs=1e-12)
    assert obs.mean_p_plus == pytest.approx(0.0, abs=1e-12)
    assert obs.energy_plus == pytest.approx(0.5, abs=1e-10)
    assert obs.energy_minus == pytest.approx(0.5, abs=1e-10)
    assert obs.separation == pytest.approx(0.0, abs=1e-12)
    assert obs.overlap == pytest.approx(1.0, abs=1e-12)


def test_observables_rejects_corrupt_states(grid):
    state = initial_state(grid)
    with pytest.raises(CorruptStateError):
        observables(state.with_components(2 * state.psi_plus, state.psi_minus, 0.0))

    broken = np.array(state.psi_plus)
    broken[3] = np.nan
    with pytest.raises(CorruptStateError):
        observables(state.with_components(broken, state.psi_minus, 0.0))


def test_l2_distance(grid):
    state = initial_state(grid)
    zero = state.with_components(np.zeros(grid.n_points), np.zeros(grid.n_points), 0.0)

    assert l2_distance(state, state) == 0.0
    assert l2_distance(state, zero) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidParameter):
        l2_distance(state, initial_state(make_grid(-8, 8, 512)))
