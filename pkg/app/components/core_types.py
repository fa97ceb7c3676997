"""
Core Types
Grid, spinor field and observables shared by every service.

Units are the scaled ones of the two-component equation
    i dPsi+/dt = -1/2 d2Psi+/dz2 - g z Psi+
    i dPsi-/dt = -1/2 d2Psi-/dz2 + g z Psi-
with hbar = m = 1. Mass, gyromagnetic ratio, field gradient and hbar are
absorbed by the scaling; only g survives (3 in the reference setup). Each
component is normalized to 1, the physical spinor being
(Psi+ |up> + Psi- |down>) / sqrt(2).
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from scipy import fft

from app.utils.exceptions import CorruptStateError, InvalidParameter

DEFAULT_GRADIENT = 3.0
DEFAULT_Z_MAX = 8.0
DEFAULT_N_POINTS = 1024
NORM_TOLERANCE = 1e-6


class Branch(str, Enum):
    """Spin component: plus is the |up> coefficient, minus the |down> one."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


class Method(str, Enum):
    SPECTRAL = "spectral"
    IMPLICIT = "implicit"


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SpatialGrid:
    """
    Uniform periodic grid z_k = z_min + k*dz, k = 0..n_points-1 (z_max excluded).

    The domain must be symmetric so that z = 0 is a grid point and the
    reflection z -> -z maps grid points onto grid points.
    """

    z_min: float
    z_max: float
    n_points: int

    def __post_init__(self):
        if isinstance(self.n_points, bool) or not isinstance(self.n_points, (int, np.integer)):
            raise InvalidParameter(f"n_points must be an integer, got {self.n_points!r}")
        if not (math.isfinite(self.z_min) and math.isfinite(self.z_max)):
            raise InvalidParameter("grid bounds must be finite")
        if self.z_max <= 0:
            raise InvalidParameter(f"z_max must be positive, got {self.z_max}")
        if self.z_min != -self.z_max:
            raise InvalidParameter(
                f"grid must be symmetric about 0, got [{self.z_min}, {self.z_max}]"
            )
        if self.n_points < 8 or not _is_power_of_two(int(self.n_points)):
            raise InvalidParameter(
                f"n_points must be a power of two >= 8, got {self.n_points}"
            )

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.n_points

    @cached_property
    def z(self) -> np.ndarray:
        points = self.z_min + np.arange(self.n_points) * self.dz
        points.setflags(write=False)
        return points

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """k_j = 2 pi j / (N dz), j = 0..N/2-1, then the negative frequencies."""
        k = 2.0 * np.pi * fft.fftfreq(self.n_points, d=self.dz)
        k.setflags(write=False)
        return k

    @cached_property
    def mirror_index(self) -> np.ndarray:
        """Index of -z_k. The seam point z_min maps onto itself."""
        idx = (self.n_points - np.arange(self.n_points)) % self.n_points
        idx.setflags(write=False)
        return idx

    def index_nearest(self, z: float) -> int:
        return int(np.argmin(np.abs(self.z - z)))


def make_grid(z_min: float, z_max: float, n_points: int) -> SpatialGrid:
    """Build a validated symmetric grid; raises InvalidParameter otherwise."""
    return SpatialGrid(float(z_min), float(z_max), n_points)


def default_grid() -> SpatialGrid:
    return make_grid(-DEFAULT_Z_MAX, DEFAULT_Z_MAX, DEFAULT_N_POINTS)


def _frozen_complex(values, n_points: int, name: str) -> np.ndarray:
    array = np.array(values, dtype=np.complex128, copy=True)
    if array.shape != (n_points,):
        raise InvalidParameter(f"{name} must have shape ({n_points},), got {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Pair (Psi+, Psi-) sampled on a grid at one instant. Arrays are read-only."""

    grid: SpatialGrid
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        n = self.grid.n_points
        object.__setattr__(self, "psi_plus", _frozen_complex(self.psi_plus, n, "psi_plus"))
        object.__setattr__(self, "psi_minus", _frozen_complex(self.psi_minus, n, "psi_minus"))
        object.__setattr__(self, "time", float(self.time))

    def component(self, branch: Branch) -> np.ndarray:
        return self.psi_plus if branch is Branch.PLUS else self.psi_minus

    def norms(self):
        dz = self.grid.dz
        return (
            float(np.sum(np.abs(self.psi_plus) ** 2) * dz),
            float(np.sum(np.abs(self.psi_minus) ** 2) * dz),
        )

    @property
    def weight(self) -> np.ndarray:
        """Local combined density (|Psi+|^2 + |Psi-|^2) / 2."""
        return 0.5 * (np.abs(self.psi_plus) ** 2 + np.abs(self.psi_minus) ** 2)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.psi_plus)) and np.all(np.isfinite(self.psi_minus)))

    def with_components(self, psi_plus, psi_minus, time: float) -> "SpinorField":
        return SpinorField(self.grid, psi_plus, psi_minus, time)


@dataclass(frozen=True)
class Observables:
    """Per-component expectation values used for Ehrenfest and energy checks."""

    mean_z_plus: float
    mean_z_minus: float
    mean_p_plus: float
    mean_p_minus: float
    energy_plus: float
    energy_minus: float
    norm_plus: float
    norm_minus: float
    overlap: complex = field(default=0j)

    @property
    def separation(self) -> float:
        """<z>+ - <z>-, the Stern-Gerlach splitting (g t^2 for the Gaussian start)."""
        return self.mean_z_plus - self.mean_z_minus


def initial_state(grid: SpatialGrid) -> SpinorField:
    """Psi+(z,0) = Psi-(z,0) = exp(-z^2) / (pi/2)^(1/4)."""
    psi = np.exp(-grid.z ** 2) / (np.pi / 2.0) ** 0.25
    return SpinorField(grid, psi, psi.copy(), 0.0)


def linear_potential(grid: SpatialGrid, g: float, branch: Branch) -> np.ndarray:
    """
    V = -g z for plus, +g z for minus.

    On the periodic grid the potential is a sawtooth; the seam point z_min
    (identified with z_max) takes the mean of its one-sided limits, 0, which
    keeps the plus and minus problems exact mirror images on the grid.
    """
    v = -branch.sign * g * grid.z
    v[0] = 0.0
    return v


def spectral_derivative(psi: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    return fft.ifft(1j * grid.wavenumbers * fft.fft(psi))


def component_overlap(state: SpinorField) -> complex:
    """<Psi+|Psi-> over the grid; the spin coherence of the whole beam."""
    return complex(np.sum(np.conj(state.psi_plus) * state.psi_minus) * state.grid.dz)


def observables(state: SpinorField, g: float = DEFAULT_GRADIENT) -> Observables:
    """
    Compute <z>, <p> and <H> for both components.

    <p> uses the spectral derivative; <H> = int 1/2 |dPsi/dz|^2 + V |Psi|^2 dz.
    Raises CorruptStateError for non-finite or unnormalized fields.
    """
    if not state.is_finite():
        raise CorruptStateError("spinor field holds non-finite values")

    norm_plus, norm_minus = state.norms()
    for name, norm in (("plus", norm_plus), ("minus", norm_minus)):
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise CorruptStateError(f"{name} component norm {norm:.12g} is not 1")

    grid = state.grid
    dz = grid.dz
    values = {}
    for branch in Branch:
        psi = state.component(branch)
        dpsi = spectral_derivative(psi, grid)
        density = np.abs(psi) ** 2
        potential = linear_potential(grid, g, branch)
        values[branch] = (
            float(np.sum(grid.z * density) * dz),
            float(np.imag(np.sum(np.conj(psi) * dpsi)) * dz),
            float(np.sum(0.5 * np.abs(dpsi) ** 2 + potential * density) * dz),
        )

    plus, minus = values[Branch.PLUS], values[Branch.MINUS]
    return Observables(
        mean_z_plus=plus[0],
        mean_z_minus=minus[0],
        mean_p_plus=plus[1],
        mean_p_minus=minus[1],
        energy_plus=plus[2],
        energy_minus=minus[2],
        norm_plus=norm_plus,
        norm_minus=norm_minus,
        overlap=component_overlap(state),
    )


def mirror_deviation(state: SpinorField) -> float:
    """max_k |Psi-(z_k) - Psi+(-z_k)|."""
    reflected = state.psi_plus[state.grid.mirror_index]
    return float(np.max(np.abs(state.psi_minus - reflected)))


def l2_distance(a: SpinorField, b: SpinorField) -> float:
    """Spinor L2 distance with the 1/sqrt(2) component weights."""
    if a.grid != b.grid:
        raise InvalidParameter("states live on different grids")
    diff = np.abs(a.psi_plus - b.psi_plus) ** 2 + np.abs(a.psi_minus - b.psi_minus) ** 2
    return float(np.sqrt(0.5 * np.sum(diff) * a.grid.dz))
