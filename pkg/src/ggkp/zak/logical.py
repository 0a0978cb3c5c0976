"""Generalized GKP logical states and their torus-level properties."""

import math
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from ..errors import DegenerateScanError, DomainError
from ..gaussian.schema import GaussianState
from ..theta.engine import jacobi_theta3, jacobi_theta3_array, riemann_theta_array
from ..torus.schema import ThetaCharacteristic, TorusGeometry
from .schema import FlatLimitPoint, LogicalState, OverlapReport
from .transform import qzt_assemble, theta_tensor_grid

FLAT_LIMIT_SLICE_POINTS = 4096


def ggkp_logical(geom: TorusGeometry, sigma: float, bit: int) -> LogicalState:
    if bit not in (0, 1):
        raise DomainError(f"logical bit must be 0 or 1, got {bit}")
    vacuum = GaussianState.vacuum(sigma)
    char = ThetaCharacteristic.zero() if bit == 0 else ThetaCharacteristic.half()
    return LogicalState(bit=bit, distribution=qzt_assemble(vacuum, vacuum, geom, char))


def _doubled_cell_values(state: LogicalState, resolution: int) -> np.ndarray:
    dist = state.distribution
    xi = 2.0 * np.arange(resolution) / resolution
    return dist.prefactor * theta_tensor_grid(dist.Omega, dist.char, xi, xi)


def _cell_pairing(a: LogicalState, b: LogicalState, resolution: int) -> complex:
    # periodic trapezoid rule on ξ ∈ [0, 2)²
    values_a = _doubled_cell_values(a, resolution)
    values_b = _doubled_cell_values(b, resolution)
    weight = (2.0 / resolution) ** 2
    return complex(np.sum(np.conj(values_a) * values_b) * weight)


def torus_overlap_report(
    a: LogicalState, b: LogicalState, resolution: int = 512
) -> OverlapReport:
    """L² pairing over the doubled cell at ``resolution`` and half of it.

    Half-integer characteristics carry half-integer frequencies, so the
    pairing against integer-frequency states vanishes on [0, 2)², not [0, 1)².
    """
    if a.distribution.geom != b.distribution.geom:
        raise DomainError("logical states live on different tori")
    if resolution < 4 or resolution % 2:
        raise DomainError(f"resolution must be an even integer >= 4, got {resolution}")
    value = _cell_pairing(a, b, resolution)
    coarse = _cell_pairing(a, b, resolution // 2)
    return OverlapReport(
        resolution=resolution,
        value=value,
        half_resolution_value=coarse,
        richardson_error=abs(value - coarse),
    )


def torus_overlap(a: LogicalState, b: LogicalState, resolution: int = 512) -> complex:
    return torus_overlap_report(a, b, resolution).value


def normalized_overlap(a: LogicalState, b: LogicalState, resolution: int = 512) -> float:
    """|⟨a|b⟩| / (‖a‖‖b‖); prefactors cancel."""
    cross = torus_overlap(a, b, resolution)
    norm_a = torus_overlap(a, a, resolution).real
    norm_b = torus_overlap(b, b, resolution).real
    return abs(cross) / math.sqrt(norm_a * norm_b)


def _slice_magnitude(state: LogicalState, xi2: np.ndarray) -> np.ndarray:
    dist = state.distribution
    omega = dist.Omega.Omega
    if dist.Omega.is_diagonal:
        # Θ(0, ξ₂) = ϑ₃(0, τ₁)·ϑ₃(ξ₂, τ₂); ϑ₃ switches to modular inversion as τ shrinks
        values = jacobi_theta3(0.0, omega[0, 0]).value * jacobi_theta3_array(
            xi2, omega[1, 1]
        )
    else:
        xis = np.stack([np.zeros_like(xi2), xi2], axis=-1)
        values = riemann_theta_array(xis, dist.Omega, dist.char)
    return np.abs(dist.prefactor * values)


def _half_max_crossing(xi: np.ndarray, magnitude: np.ndarray, peak: int, step: int) -> float:
    half = magnitude[peak] / 2.0
    i = peak
    while 0 <= i + step < len(magnitude):
        j = i + step
        if magnitude[j] < half:
            # linear interpolation between the bracketing samples
            frac = (magnitude[i] - half) / (magnitude[i] - magnitude[j])
            return float(xi[i] + frac * (xi[j] - xi[i]))
        i = j
    raise DegenerateScanError(
        "distribution never falls to half its maximum; the peak is not resolved"
    )


def flat_limit_scan(
    sigma: float,
    hbar: float,
    scales: Sequence[float],
    base_L: float = 2.0 * math.pi,
    base_P: float = 2.0 * math.pi,
    points: Optional[int] = None,
) -> List[FlatLimitPoint]:
    """FWHM of the central ξ₂ peak of |0⟩_L as both periods grow by each scale."""
    scales = [float(c) for c in scales]
    if not scales:
        raise DomainError("at least one scale is required")
    if any(c <= 0 for c in scales):
        raise DomainError(f"scales must be positive, got {scales}")
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise DomainError(f"scales must be increasing, got {scales}")

    points = points or FLAT_LIMIT_SLICE_POINTS
    base = TorusGeometry(L=base_L, P=base_P, hbar=hbar)
    xi2 = np.linspace(-0.5, 0.5, points, endpoint=False)
    results: List[FlatLimitPoint] = []
    for c in scales:
        state = ggkp_logical(base.scaled(c), sigma, 0)
        magnitude = _slice_magnitude(state, xi2)
        peak = int(np.argmax(magnitude))
        left = _half_max_crossing(xi2, magnitude, peak, -1)
        right = _half_max_crossing(xi2, magnitude, peak, +1)
        point = FlatLimitPoint(scale=c, fwhm=right - left, peak_center=float(xi2[peak]))
        logger.debug(f"flat limit: scale={c:g} fwhm={point.fwhm:.6g}")
        results.append(point)
    return results
