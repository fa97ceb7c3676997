"""
Spin Texture Service
Position-dependent spin direction of a SpinorField and helix diagnostics.

Components are labeled 1, 2, 3: with up = a + ic and down = b + id,
    s = (2(ab + cd), 2(ad - bc), a^2 - b^2 + c^2 - d^2) / (a^2 + b^2 + c^2 + d^2).
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from app.components.core_types import SpinorField
from app.utils.exceptions import CorruptStateError, InvalidParameter, UndefinedDirectionError

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-6


def _bloch_components(up: np.ndarray, down: np.ndarray) -> np.ndarray:
    # Rescale by the larger modulus so squares neither underflow nor overflow.
    scale = np.maximum(np.abs(up), np.abs(down))
    nonzero = scale > 0
    safe = np.where(nonzero, scale, 1.0)
    up = np.where(nonzero, up / safe, 0.0)
    down = np.where(nonzero, down / safe, 0.0)

    density = np.abs(up) ** 2 + np.abs(down) ** 2
    denominator = np.where(nonzero, density, 1.0)
    coherence = 2.0 * np.conj(up) * down
    out = np.zeros(np.shape(density) + (3,))
    out[..., 0] = np.where(nonzero, coherence.real / denominator, 0.0)
    out[..., 1] = np.where(nonzero, coherence.imag / denominator, 0.0)
    out[..., 2] = np.where(nonzero, (np.abs(up) ** 2 - np.abs(down) ** 2) / denominator, 0.0)
    return out


def bloch_vector(up, down) -> np.ndarray:
    """
    Unit spin direction of the spinor (up, down).

    Scalars give shape (3,); arrays of shape S give shape S + (3,).
    Raises UndefinedDirectionError where both amplitudes are exactly zero.
    """
    up = np.asarray(up, dtype=np.complex128)
    down = np.asarray(down, dtype=np.complex128)
    if np.any((up == 0) & (down == 0)):
        raise UndefinedDirectionError("spin direction undefined where both components vanish")
    return _bloch_components(up, down)


@dataclass(frozen=True, eq=False)
class BlochSample:
    z: float
    s: np.ndarray
    weight: float
    reliable: bool


@dataclass(frozen=True, eq=False)
class TwistProfile:
    """Azimuth phi (unwrapped, 0 at z = 0) and polar angle theta over reliable samples."""

    z: np.ndarray
    phi: np.ndarray
    theta: np.ndarray


def texture(state: SpinorField, epsilon: float = DEFAULT_EPSILON) -> List[BlochSample]:
    """
    One BlochSample per grid point.

    A sample is reliable when its weight is at least epsilon times the peak
    weight. Points where both amplitudes vanish get s = (0, 0, 0); zero-weight
    points are never reliable.
    """
    if not epsilon > 0:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon}")
    if not state.is_finite():
        raise CorruptStateError("spinor field holds non-finite values")

    weight = state.weight
    threshold = epsilon * float(np.max(weight))
    directions = _bloch_components(state.psi_plus, state.psi_minus)
    reliable = (weight >= threshold) & (weight > 0)

    samples = [
        BlochSample(float(z), directions[k], float(weight[k]), bool(reliable[k]))
        for k, z in enumerate(state.grid.z)
    ]
    logger.debug("texture: %d of %d samples reliable", int(np.sum(reliable)), len(samples))
    return samples


def reliable_arrays(samples: Sequence[BlochSample]):
    """(z, s) arrays over the reliable samples, in input order."""
    kept = [sample for sample in samples if sample.reliable]
    if not kept:
        return np.empty(0), np.empty((0, 3))
    return np.array([sample.z for sample in kept]), np.array([sample.s for sample in kept])


def twist_profile(samples: Sequence[BlochSample]) -> TwistProfile:
    z, s = reliable_arrays(samples)
    if z.size < 2:
        raise InvalidParameter(
            f"twist profile needs at least 2 reliable samples, got {z.size}"
        )
    phi = np.unwrap(np.arctan2(s[:, 1], s[:, 0]))
    phi -= phi[int(np.argmin(np.abs(z)))]
    theta = np.arccos(np.clip(s[:, 2], -1.0, 1.0))
    return TwistProfile(z, phi, theta)


def fit_twist_rate(profile: TwistProfile, window: float = 1.0) -> float:
    """Least-squares slope dphi/dz over |z| <= window."""
    mask = np.abs(profile.z) <= window
    if np.count_nonzero(mask) < 2:
        raise InvalidParameter(f"fewer than 2 profile points within |z| <= {window}")
    slope, _ = np.polyfit(profile.z[mask], profile.phi[mask], 1)
    return float(slope)


def is_strictly_monotonic(values) -> bool:
    steps = np.diff(np.asarray(values, dtype=float))
    return bool(steps.size > 0 and (np.all(steps > 0) or np.all(steps < 0)))
