import numpy as np
import pytest
from scipy.linalg import solve_banded

from app.services.tridiagonal import solve_tridiagonal, tridiagonal_matvec
from app.utils.exceptions import InvalidParameter


def random_system(n, seed=0):
    rng = np.random.default_rng(seed)
    lower = 0.5 * (rng.normal(size=n) + 1j * rng.normal(size=n))
    upper = 0.5 * (rng.normal(size=n) + 1j * rng.normal(size=n))
    diag = 6.0 + rng.normal(size=n) + 1j * rng.normal(size=n)
    rhs = rng.normal(size=n) + 1j * rng.normal(size=n)
    return lower, diag, upper, rhs


@pytest.mark.parametrize("n", [1, 2, 7, 1023])
def test_solve_tridiagonal_matches_solve_banded(n):
    lower, diag, upper, rhs = random_system(n, seed=n)

    banded = np.zeros((3, n), dtype=complex)
    banded[0, 1:] = upper[:-1]
    banded[1] = diag
    banded[2, :-1] = lower[1:]

    np.testing.assert_allclose(
        solve_tridiagonal(lower, diag, upper, rhs),
        solve_banded((1, 1), banded, rhs),
        rtol=1e-12,
        atol=1e-12,
    )


def test_matvec_inverts_solve():
    lower, diag, upper, rhs = random_system(64)
    x = solve_tridiagonal(lower, diag, upper, rhs)
    np.testing.assert_allclose(tridiagonal_matvec(lower, diag, upper, x), rhs, atol=1e-12)


def test_crank_nicolson_matrix_solve_is_accurate():
    # I + i dt H / 2 for the free Hamiltonian at dz = 1/64, dt = 1e-3
    n = 1023
    off = np.full(n, -0.25j * 1e-3 * 64 ** 2)
    diag = np.full(n, 1 + 0.5j * 1e-3 * 64 ** 2)
    x = np.exp(-np.linspace(-8, 8, n) ** 2).astype(complex)

    rhs = tridiagonal_matvec(off, diag, off, x)
    np.testing.assert_allclose(solve_tridiagonal(off, diag, off, rhs), x, atol=1e-12)


def test_solve_tridiagonal_rejects_mismatched_lengths():
    lower, diag, upper, rhs = random_system(8)
    with pytest.raises(InvalidParameter):
        solve_tridiagonal(lower[:-1], diag, upper, rhs)
    with pytest.raises(InvalidParameter):
        solve_tridiagonal(lower[:0], diag[:0], upper[:0], rhs[:0])
