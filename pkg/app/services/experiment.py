"""
Experiment Service
Aperture post-selection: a screen with a hole at height z passes part of the
beam; the spin state behind the hole is the reduced density matrix over the
window, and an analyzer along any axis sees it spin-up with probability
(1 + axis . bloch) / 2.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from app.components.core_types import SpatialGrid, SpinorField
from app.utils.exceptions import InvalidParameter, ZeroPassageError

logger = logging.getLogger(__name__)

MIN_PASSAGE = 1e-12
AXIS_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class ConditionalState:
    """Spin state behind the hole, basis (|up>, |down>)."""

    rho: np.ndarray
    passage_probability: float
    bloch: np.ndarray

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))


@dataclass(frozen=True, eq=False)
class ScanRow:
    """One hole position; the optional fields are None when nothing passes."""

    z_center: float
    passage_probability: Optional[float] = None
    bloch: Optional[np.ndarray] = None
    purity: Optional[float] = None

    @property
    def defined(self) -> bool:
        return self.bloch is not None


def window_weights(grid: SpatialGrid, z_center: float, half_width: float) -> np.ndarray:
    """
    Fraction of each grid cell [z_k - dz/2, z_k + dz/2) inside
    [z_center - half_width, z_center + half_width].
    """
    if not (math.isfinite(half_width) and half_width > 0):
        raise InvalidParameter(f"half_width must be positive, got {half_width}")
    if not math.isfinite(z_center):
        raise InvalidParameter(f"z_center must be finite, got {z_center}")

    dz = grid.dz
    lo = np.maximum(grid.z - 0.5 * dz, z_center - half_width)
    hi = np.minimum(grid.z + 0.5 * dz, z_center + half_width)
    return np.clip(hi - lo, 0.0, None) / dz


def aperture_postselect(state: SpinorField, z_center: float, half_width: float) -> ConditionalState:
    weights = window_weights(state.grid, z_center, half_width)
    if not np.any(weights > 0):
        raise ZeroPassageError(
            f"window [{z_center - half_width:g}, {z_center + half_width:g}] misses the grid"
        )

    dz = state.grid.dz
    psi = np.stack([state.psi_plus, state.psi_minus])
    # 1/sqrt(2) spinor weights give the factor 1/2
    unnormalized = 0.5 * dz * np.einsum("k,ik,jk->ij", weights, psi, np.conj(psi))
    passage = float(np.real(np.trace(unnormalized)))
    if passage < MIN_PASSAGE:
        raise ZeroPassageError(f"passage probability {passage:.3e} below {MIN_PASSAGE:g}")

    rho = unnormalized / passage
    rho = 0.5 * (rho + rho.conj().T)
    rho.setflags(write=False)
    bloch = np.array([
        2.0 * rho[0, 1].real,
        2.0 * rho[1, 0].imag,
        (rho[0, 0] - rho[1, 1]).real,
    ])
    bloch.setflags(write=False)
    return ConditionalState(rho, passage, bloch)


def measurement_probability(cond: ConditionalState, axis) -> float:
    """P(spin up along axis)."""
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(float(np.linalg.norm(axis)) - 1.0) > AXIS_TOLERANCE:
        raise InvalidParameter(f"axis must be a unit 3-vector, got {axis.tolist()}")
    return float(np.clip(0.5 + 0.5 * float(axis @ cond.bloch), 0.0, 1.0))


def scan_hole(state: SpinorField, z_centers: Sequence[float], half_width: float) -> List[ScanRow]:
    if not (math.isfinite(half_width) and half_width > 0):
        raise InvalidParameter(f"half_width must be positive, got {half_width}")

    rows = []
    for z_center in z_centers:
        try:
            cond = aperture_postselect(state, float(z_center), half_width)
        except ZeroPassageError as e:
            logger.warning("hole at z=%g: %s", z_center, e)
            rows.append(ScanRow(float(z_center)))
            continue
        rows.append(ScanRow(float(z_center), cond.passage_probability, cond.bloch, cond.purity))
    return rows


def sample_clicks(cond: ConditionalState, axis, shots: int, rng: np.random.Generator) -> int:
    """Number of spin-up clicks among `shots` analyzer events."""
    if isinstance(shots, bool) or not isinstance(shots, (int, np.integer)) or shots < 0:
        raise InvalidParameter(f"shots must be a non-negative integer, got {shots!r}")
    if not isinstance(rng, np.random.Generator):
        raise InvalidParameter("sample_clicks needs an explicit numpy Generator")
    return int(rng.binomial(int(shots), measurement_probability(cond, axis)))
