import numpy as np
import pytest

from app.components.core_types import Branch, initial_state
from app.services.analytic_oracle import (
    TWIST_RATE_T1_G3,
    OracleParams,
    exact_bloch,
    exact_component,
    exact_state,
    residual_certificate,
    twist_rate,
)
from app.utils.exceptions import InvalidParameter, UndefinedDirectionError

Z = np.linspace(-6.0, 6.0, 49)


def test_t0_is_the_initial_gaussian(grid):
    np.testing.assert_allclose(
        exact_component(grid.z, 0.0, 3.0, Branch.PLUS),
        initial_state(grid).psi_plus,
        rtol=1e-14,
        atol=0,
    )


def test_scalar_input_gives_complex():
    value = exact_component(0.0, 0.0)
    assert isinstance(value, complex)
    assert value == pytest.approx((np.pi / 2) ** -0.25)


def test_negative_time_is_rejected():
    with pytest.raises(InvalidParameter):
        exact_component(0.0, -0.1)


def test_minus_branch_is_mirror_of_plus():
    np.testing.assert_array_equal(
        exact_component(Z, 1.0, 3.0, Branch.MINUS),
        exact_component(-Z, 1.0, 3.0, Branch.PLUS),
    )


def test_density_at_t1_is_drifted_spread_gaussian():
    mean, variance = 1.5, 1.25
    expected = np.exp(-((Z - mean) ** 2) / (2 * variance)) / np.sqrt(2 * np.pi * variance)
    np.testing.assert_allclose(np.abs(exact_component(Z, 1.0, 3.0)) ** 2, expected, rtol=1e-12)


def test_norm_is_one_by_quadrature(wide_grid):
    for t in (0.0, 0.5, 1.0):
        for norm in exact_state(wide_grid, t).norms():
            assert norm == pytest.approx(1.0, abs=1e-10)


def test_residual_certificate():
    assert residual_certificate(3.0) <= 1e-6


def test_residual_detects_a_non_solution():
    # a Gaussian that drifts but never spreads does not solve the equation
    params = OracleParams(g=3.0)
    z, t, h = 0.3, 0.5, 1e-4
    frozen = lambda zz, tt: params.free_gaussian(zz - 1.5 * tt ** 2, 0.0)  # noqa: E731
    dpsi_dt = (frozen(z, t + h) - frozen(z, t - h)) / (2 * h)
    d2psi = (frozen(z + h, t) - 2 * frozen(z, t) + frozen(z - h, t)) / h ** 2
    residual = 1j * dpsi_dt + 0.5 * d2psi + 3.0 * z * frozen(z, t)

    assert abs(residual) / abs(frozen(z, t)) > 1e-2
    assert params.residual(np.array([z]), np.array([t]), Branch.PLUS, 1e-3, 1e-4)[0] <= 1e-6


def test_exact_bloch_at_origin_points_along_first_axis():
    for t, g in [(0.0, 3.0), (0.7, 3.0), (1.0, 3.0), (2.0, 1.5)]:
        np.testing.assert_allclose(exact_bloch(0.0, t, g), [1.0, 0.0, 0.0], atol=1e-12)


def test_exact_bloch_third_component_is_tanh():
    z = np.linspace(-5.0, 5.0, 21)
    s = exact_bloch(z, 1.0, 3.0)

    np.testing.assert_allclose(s[:, 2], np.tanh(1.2 * z), atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(s, axis=1), 1.0, atol=1e-12)
    assert exact_bloch(5.0, 1.0, 3.0)[2] > 0.99


def test_exact_bloch_undefined_where_density_underflows():
    with pytest.raises(UndefinedDirectionError):
        exact_bloch(60.0, 0.0, 3.0)


def test_twist_rate_constant():
    assert twist_rate(1.0, 3.0) == pytest.approx(TWIST_RATE_T1_G3, abs=1e-12)
    assert twist_rate(0.0, 3.0) == 0.0


def test_oracle_azimuth_is_linear_with_twist_rate():
    z = np.linspace(-0.5, 0.5, 11)
    up = exact_component(z, 1.0, 3.0, Branch.PLUS)
    down = exact_component(z, 1.0, 3.0, Branch.MINUS)

    phi = np.angle(down * np.conj(up))
    np.testing.assert_allclose(phi, twist_rate(1.0, 3.0) * z, atol=1e-10)


def test_oracle_params_validation():
    with pytest.raises(InvalidParameter):
        OracleParams(g=3.0, sigma0_sq=0.0)
    with pytest.raises(InvalidParameter):
        OracleParams(g=np.nan)


def test_exact_state_carries_time(grid):
    state = exact_state(grid, 0.25)
    assert state.time == 0.25
