"""
Tridiagonal Solver
Thomas algorithm for complex tridiagonal systems, compiled with numba.
"""

import numpy as np
from numba import njit

from app.utils.exceptions import InvalidParameter


@njit(cache=True, nogil=True)
def _thomas(lower, diag, upper, rhs):
    n = rhs.shape[0]
    c_prime = np.empty(n, dtype=np.complex128)
    d_prime = np.empty(n, dtype=np.complex128)
    x = np.empty(n, dtype=np.complex128)

    c_prime[0] = upper[0] / diag[0]
    d_prime[0] = rhs[0] / diag[0]
    for k in range(1, n):
        denom = diag[k] - lower[k] * c_prime[k - 1]
        c_prime[k] = upper[k] / denom
        d_prime[k] = (rhs[k] - lower[k] * d_prime[k - 1]) / denom

    x[n - 1] = d_prime[n - 1]
    for k in range(n - 2, -1, -1):
        x[k] = d_prime[k] - c_prime[k] * x[k + 1]
    return x


def solve_tridiagonal(lower, diag, upper, rhs) -> np.ndarray:
    """
    Solve M x = rhs for tridiagonal M without pivoting.

    Parameters
    ----------
    lower : ndarray
        Sub-diagonal as a length-n array (lower[0] is ignored).
    diag : ndarray
        Main diagonal, length n.
    upper : ndarray
        Super-diagonal as a length-n array (upper[-1] is ignored).
    rhs : ndarray
        Right-hand side, length n.

    Pivot-free elimination is stable for the Crank-Nicolson matrices
    I + i*dt*H/2, whose Hermitian part is the identity.
    """
    arrays = [np.ascontiguousarray(a, dtype=np.complex128) for a in (lower, diag, upper, rhs)]
    n = arrays[3].shape[0]
    if n == 0 or any(a.shape != (n,) for a in arrays):
        raise InvalidParameter("tridiagonal bands and right-hand side must share one length")
    return _thomas(*arrays)


def tridiagonal_matvec(lower, diag, upper, x) -> np.ndarray:
    """y = M x for the same band layout as solve_tridiagonal."""
    y = diag * x
    y[1:] += lower[1:] * x[:-1]
    y[:-1] += upper[:-1] * x[1:]
    return y
