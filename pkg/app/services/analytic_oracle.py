"""
Analytic Oracle
Closed-form solution of the gradient-field equation for the Gaussian start.

The plus component sees the constant force +g. Moving to the accelerated
frame maps it onto free evolution:
    Psi+(z, t) = exp(i(g t z - g^2 t^3 / 6)) * phi(z - g t^2 / 2, t)
where phi is the freely spreading Gaussian written with a complex width.
The minus component is the mirror image, Psi-(z, t) = Psi+(-z, t).

The closed form is checked against the equation by residual_certificate,
independently of the integrators it is used to test.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from app.components.core_types import DEFAULT_GRADIENT, Branch, SpatialGrid, SpinorField
from app.services.spin_texture import bloch_vector
from app.utils.exceptions import InvalidParameter, UndefinedDirectionError

logger = logging.getLogger(__name__)

INITIAL_VARIANCE = 0.25
MIN_DENSITY = 1e-300
CERTIFICATE_BOUND = 1e-6

# dphi/dz of the oracle texture at t = 1, g = 3
TWIST_RATE_T1_G3 = -3.6


@dataclass(frozen=True)
class OracleParams:
    g: float = DEFAULT_GRADIENT
    sigma0_sq: float = INITIAL_VARIANCE

    def __post_init__(self):
        if not (math.isfinite(self.sigma0_sq) and self.sigma0_sq > 0):
            raise InvalidParameter(f"sigma0_sq must be positive, got {self.sigma0_sq}")
        if not math.isfinite(self.g):
            raise InvalidParameter(f"g must be finite, got {self.g}")

    def free_gaussian(self, xi, t):
        """Free evolution of (2 pi sigma0^2)^(-1/4) exp(-xi^2 / (4 sigma0^2))."""
        spread = 1.0 + 1j * t / (2.0 * self.sigma0_sq)
        amplitude = (2.0 * np.pi * self.sigma0_sq) ** -0.25 / np.sqrt(spread)
        return amplitude * np.exp(-(xi ** 2) / (4.0 * self.sigma0_sq * spread))

    def evaluate(self, z, t, branch: Branch = Branch.PLUS):
        """Psi_branch(z, t) for any real t, including t < 0."""
        z = np.asarray(z, dtype=float)
        t = np.asarray(t, dtype=float)
        x = branch.sign * z
        g = self.g
        phase = np.exp(1j * (g * t * x - g ** 2 * t ** 3 / 6.0))
        return phase * self.free_gaussian(x - 0.5 * g * t ** 2, t)

    def component(self, z, t: float, branch: Branch = Branch.PLUS):
        if t < 0:
            raise InvalidParameter(f"oracle is defined for t >= 0, got {t}")
        values = self.evaluate(z, t, Branch(branch))
        return complex(values) if np.ndim(values) == 0 else values

    def residual(self, z, t, branch: Branch, h_z: float, h_t: float) -> np.ndarray:
        """
        |i dPsi/dt + 1/2 d2Psi/dz2 + sign*g*z*Psi| / |Psi| from fourth-order
        central differences.
        """
        f = self.evaluate
        dpsi_dt = (
            -f(z, t + 2 * h_t, branch) + 8 * f(z, t + h_t, branch)
            - 8 * f(z, t - h_t, branch) + f(z, t - 2 * h_t, branch)
        ) / (12.0 * h_t)
        psi = f(z, t, branch)
        d2psi_dz2 = (
            -f(z + 2 * h_z, t, branch) + 16 * f(z + h_z, t, branch) - 30 * psi
            + 16 * f(z - h_z, t, branch) - f(z - 2 * h_z, t, branch)
        ) / (12.0 * h_z ** 2)
        r = 1j * dpsi_dt + 0.5 * d2psi_dz2 + branch.sign * self.g * z * psi
        return np.abs(r) / np.abs(psi)


def exact_component(z, t: float, g: float = DEFAULT_GRADIENT, branch: Branch = Branch.PLUS):
    """Psi_branch(z, t); z may be a scalar or an array. Rejects t < 0."""
    return OracleParams(g).component(z, t, branch)


def exact_state(grid: SpatialGrid, t: float, g: float = DEFAULT_GRADIENT) -> SpinorField:
    params = OracleParams(g)
    return SpinorField(
        grid,
        params.component(grid.z, t, Branch.PLUS),
        params.component(grid.z, t, Branch.MINUS),
        t,
    )


def exact_bloch(z, t: float, g: float = DEFAULT_GRADIENT) -> np.ndarray:
    """Oracle spin direction at (z, t); raises where the combined density underflows."""
    params = OracleParams(g)
    up = params.component(z, t, Branch.PLUS)
    down = params.component(z, t, Branch.MINUS)
    density = np.abs(up) ** 2 + np.abs(down) ** 2
    if np.any(density < MIN_DENSITY):
        raise UndefinedDirectionError(f"combined density below {MIN_DENSITY:g} at t={t}")
    return bloch_vector(up, down)


def twist_rate(t: float, g: float = DEFAULT_GRADIENT) -> float:
    """
    Slope of the oracle azimuth arg(Psi-) - arg(Psi+) in z.

    The azimuth is exactly linear: -2 g t from the accelerated-frame phase,
    plus 4 g t^3 / (1 + 4 t^2) from the chirp of the displaced Gaussian.
    """
    return -2.0 * g * t + 4.0 * g * t ** 3 / (1.0 + 4.0 * t ** 2)


def residual_certificate(
    g: float = DEFAULT_GRADIENT,
    z_samples=None,
    t_samples=None,
    h_z: float = 1e-3,
    h_t: float = 1e-4,
) -> float:
    """
    Largest relative PDE residual of the closed form over a (z, t) lattice,
    both components. Defaults to 101 x 101 points on [-8, 8] x [0, 1].
    """
    if z_samples is None:
        z_samples = np.linspace(-8.0, 8.0, 101)
    if t_samples is None:
        t_samples = np.linspace(0.0, 1.0, 101)
    params = OracleParams(g)
    zz, tt = np.meshgrid(np.asarray(z_samples, float), np.asarray(t_samples, float))

    worst = max(float(np.max(params.residual(zz, tt, branch, h_z, h_t))) for branch in Branch)
    logger.info("oracle residual certificate: max relative residual %.3e", worst)
    return worst
