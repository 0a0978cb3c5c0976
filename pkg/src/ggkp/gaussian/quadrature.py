"""Composite-trapezoid oracle for overlaps of Gaussian wavefunctions.

The integrands are entire and decay like Gaussians, so the trapezoid rule on a
window that covers both centers converges faster than any power of the node
spacing once the fastest phase oscillation and the narrowest envelope are
resolved. Results never touch the closed form.
"""

import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import trapezoid

from ..config import settings
from ..errors import QuadratureResolutionError
from ..torus.schema import TorusGeometry
from .schema import GaussianState, QuadConfig
from .wavefunctions import Ket, displace, state_ket, wavefunction


def overlap_quadrature(
    probe: GaussianState,
    ket: Ket,
    lo: float,
    hi: float,
    max_frequency: float,
    min_width: float,
    cfg: Optional[QuadConfig] = None,
    hbar: float = 1.0,
) -> complex:
    """∫ φ*(q) ket(q) dq over [lo, hi] with doubling refinement.

    ``max_frequency`` bounds |d(phase)/dq| of the integrand and ``min_width``
    is the envelope width; both decide when the node spacing counts as
    resolved. Unresolved grids are never accepted.
    """
    cfg = cfg or QuadConfig()
    nodes = cfg.node_count
    previous: Optional[complex] = None

    while nodes <= cfg.max_nodes:
        h = (hi - lo) / nodes
        resolved = h * max_frequency <= math.pi / 2 and h <= min_width
        if resolved:
            q = np.linspace(lo, hi, nodes + 1)
            integrand = np.conj(wavefunction(probe, q, hbar)) * ket(q)
            value = complex(trapezoid(integrand, dx=h))
            if not cfg.refine:
                return value
            if previous is not None and abs(value - previous) <= max(
                cfg.rtol * abs(value), settings.abs_floor
            ):
                logger.debug(f"quadrature converged with {nodes} panels")
                return value
            previous = value
        elif not cfg.refine:
            break
        nodes *= 2

    raise QuadratureResolutionError(
        f"node spacing cannot resolve the integrand (oscillation {max_frequency:.4g}, "
        f"envelope width {min_width:.4g}) within {cfg.max_nodes} panels; "
        "increase the node count or the node cap"
    )


def _window(
    centers: Tuple[float, ...], widths: Tuple[float, ...], cfg: QuadConfig
) -> Tuple[float, float]:
    reach = cfg.half_width_sigmas * max(widths)
    return min(centers) - reach, max(centers) + reach


def _envelope_width(probe: GaussianState, signal: GaussianState) -> float:
    a, b = probe.sigma, signal.sigma
    return a * b / math.hypot(a, b)


def matrix_element_quadrature(
    probe: GaussianState,
    signal: GaussianState,
    geom: TorusGeometry,
    m: int,
    n: int,
    cfg: Optional[QuadConfig] = None,
) -> complex:
    """⟨φ|D(mα₀,nβ₀)|ψ⟩ by direct quadrature of the position-space integral."""
    cfg = cfg or QuadConfig()
    ket = displace(state_ket(signal, geom.hbar), m, n, geom)
    lo, hi = _window(
        (probe.q_center, signal.q_center + m * geom.alpha0),
        (probe.sigma, signal.sigma),
        cfg,
    )
    frequency = abs(signal.p_center + n * geom.beta0 - probe.p_center) / geom.hbar
    return overlap_quadrature(
        probe, ket, lo, hi, frequency, _envelope_width(probe, signal), cfg, geom.hbar
    )


def composed_element_quadrature(
    probe: GaussianState,
    signal: GaussianState,
    geom: TorusGeometry,
    first: Tuple[int, int],
    second: Tuple[int, int],
    cfg: Optional[QuadConfig] = None,
) -> complex:
    """⟨φ|D_{m,n} D_{m′,n′}|ψ⟩, applying the two displacements in turn."""
    cfg = cfg or QuadConfig()
    (m, n), (m2, n2) = first, second
    ket = displace(displace(state_ket(signal, geom.hbar), m2, n2, geom), m, n, geom)
    lo, hi = _window(
        (probe.q_center, signal.q_center + (m + m2) * geom.alpha0),
        (probe.sigma, signal.sigma),
        cfg,
    )
    frequency = (
        abs(signal.p_center + (n + n2) * geom.beta0 - probe.p_center) / geom.hbar
    )
    return overlap_quadrature(
        probe, ket, lo, hi, frequency, _envelope_width(probe, signal), cfg, geom.hbar
    )


def normalization_quadrature(
    state: GaussianState, hbar: float = 1.0, cfg: Optional[QuadConfig] = None
) -> float:
    """∫|ψ(q)|² dq."""
    cfg = cfg or QuadConfig()
    lo, hi = _window((state.q_center,), (state.sigma,), cfg)
    value = overlap_quadrature(
        state,
        state_ket(state, hbar),
        lo,
        hi,
        0.0,
        state.sigma / math.sqrt(2.0),
        cfg,
        hbar,
    )
    return value.real
