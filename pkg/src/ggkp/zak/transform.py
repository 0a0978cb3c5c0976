"""Quantum Zak transform of two Gaussian states on the torus.

The theta path (``qzt_eval``) and the brute-force path (``qzt_brute_force``)
share nothing below the state types: the latter sums quadrature matrix
elements against torus characters and never calls into ``ggkp.theta``.
"""

import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..errors import DomainError, GeometryError, VerificationError
from ..gaussian.closed_form import closed_form_parts
from ..gaussian.quadrature import matrix_element_quadrature
from ..gaussian.schema import GaussianState, QuadConfig
from ..theta.engine import riemann_theta, riemann_theta_array
from ..theta.schema import PeriodMatrix
from ..torus.core import character, character_value
from ..torus.schema import ThetaCharacteristic, TorusGeometry
from .schema import GridSpec, QZTDistribution


def qzt_assemble(
    probe: GaussianState,
    signal: GaussianState,
    geom: TorusGeometry,
    char: Optional[ThetaCharacteristic] = None,
) -> QZTDistribution:
    parts = closed_form_parts(probe, signal, geom)
    try:
        omega = PeriodMatrix(Omega=1j * parts.Gamma)
    except GeometryError as e:
        raise GeometryError(f"invalid physical parameters: {e.detail}")
    return QZTDistribution(
        geom=geom,
        parts=parts,
        char=char or ThetaCharacteristic.zero(),
        Omega=omega,
        xi_offset=parts.eta / (2j * math.pi),
    )


def qzt_xi(dist: QZTDistribution, x: ArrayLike, k: ArrayLike) -> np.ndarray:
    """ξ = (−α₀k, β₀x) + η/(2πi), stacked on the last axis."""
    x, k = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(k, dtype=float))
    return np.stack(
        [
            -dist.geom.alpha0 * k + dist.xi_offset[0],
            dist.geom.beta0 * x + dist.xi_offset[1],
        ],
        axis=-1,
    )


def qzt_eval_xi(
    dist: QZTDistribution, xi: ArrayLike, tol: Optional[float] = None
) -> complex:
    """Distribution at a dimensionless torus point ξ."""
    return dist.prefactor * riemann_theta(xi, dist.Omega, dist.char, tol).value


def qzt_eval(
    dist: QZTDistribution, x: float, k: float, tol: Optional[float] = None
) -> complex:
    return qzt_eval_xi(dist, qzt_xi(dist, x, k), tol)


def theta_tensor_grid(
    Omega: PeriodMatrix,
    char: ThetaCharacteristic,
    xi1: np.ndarray,
    xi2: np.ndarray,
    tol: Optional[float] = None,
) -> np.ndarray:
    """Θ[char]((xi1[i], xi2[j])|Ω) as an array indexed [i, j].

    A diagonal Ω splits into two genus-1 sums per axis.
    """
    xi1 = np.asarray(xi1, dtype=complex)
    xi2 = np.asarray(xi2, dtype=complex)
    if Omega.is_diagonal:
        factors = []
        for axis, values in enumerate((xi1, xi2)):
            axis_char = ThetaCharacteristic(
                epsilon=char.epsilon[axis : axis + 1], delta=char.delta[axis : axis + 1]
            )
            period = PeriodMatrix.from_tau(Omega.Omega[axis, axis])
            factors.append(
                riemann_theta_array(values[:, None], period, axis_char, tol)
            )
        return np.outer(factors[0], factors[1])
    grid = np.stack(np.meshgrid(xi1, xi2, indexing="ij"), axis=-1)
    return riemann_theta_array(grid, Omega, char, tol)


def qzt_grid(
    dist: QZTDistribution, grid: GridSpec, tol: Optional[float] = None
) -> np.ndarray:
    """Values on the grid, indexed [k_index, x_index]."""
    xi1 = -dist.geom.alpha0 * grid.ks() + dist.xi_offset[0]
    xi2 = dist.geom.beta0 * grid.xs() + dist.xi_offset[1]
    return dist.prefactor * theta_tensor_grid(dist.Omega, dist.char, xi1, xi2, tol)


def canonical_trace(dist: QZTDistribution) -> complex:
    """Coefficient of the identity character, i.e. ⟨φ|ψ⟩ for the zero characteristic."""
    if all(e.denominator == 1 for e in dist.char.epsilon):
        return dist.prefactor
    return 0j


def brute_force_coefficients(
    probe: GaussianState,
    signal: GaussianState,
    geom: TorusGeometry,
    radius: int,
    cfg: Optional[QuadConfig] = None,
) -> np.ndarray:
    """Quadrature matrix elements indexed [m + R, n + R] for ‖(m,n)‖_∞ ≤ R."""
    if radius < 0:
        raise DomainError(f"radius must be non-negative, got {radius}")
    width = 2 * radius + 1
    coeffs = np.empty((width, width), dtype=complex)
    for i, m in enumerate(range(-radius, radius + 1)):
        for j, n in enumerate(range(-radius, radius + 1)):
            coeffs[i, j] = matrix_element_quadrature(probe, signal, geom, m, n, cfg)
    logger.debug(f"brute force: {width * width} quadrature elements at radius {radius}")
    return coeffs


def brute_force_sum(coeffs: np.ndarray, geom: TorusGeometry, x: float, k: float) -> complex:
    """Σ ⟨φ|D_{m,n}|ψ⟩ χ_{m,n}(x, k) with compensated accumulation."""
    radius = (coeffs.shape[0] - 1) // 2
    terms = [
        coeffs[m + radius, n + radius] * character_value(character(m, n), geom, x, k)
        for m in range(-radius, radius + 1)
        for n in range(-radius, radius + 1)
    ]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def qzt_brute_force(
    probe: GaussianState,
    signal: GaussianState,
    geom: TorusGeometry,
    x: float,
    k: float,
    radius: int,
    cfg: Optional[QuadConfig] = None,
) -> complex:
    coeffs = brute_force_coefficients(probe, signal, geom, radius, cfg)
    return brute_force_sum(coeffs, geom, x, k)


def squeezed_vacuum_tau_forms(
    geom: TorusGeometry, sigma: float
) -> Tuple[Tuple[complex, complex], Tuple[complex, complex]]:
    """Both closed forms of τ₁ and of τ₂, with the imaginary unit on each."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    pi, hbar, theta0 = math.pi, geom.hbar, geom.theta0
    tau1 = (
        1j * pi * hbar**2 / (geom.P**2 * sigma**2),
        1j * theta0**2 * geom.L**2 / (4.0 * pi * sigma**2),
    )
    tau2 = (
        1j * pi * sigma**2 / geom.L**2,
        1j * theta0**2 * sigma**2 * geom.P**2 / (4.0 * pi * hbar**2),
    )
    return tau1, tau2


def squeezed_vacuum_tau(geom: TorusGeometry, sigma: float) -> Tuple[complex, complex]:
    """Diagonal of Ω for two equally squeezed vacua."""
    (tau1, tau1_alt), (tau2, tau2_alt) = squeezed_vacuum_tau_forms(geom, sigma)
    vacuum = GaussianState.vacuum(sigma)
    gamma = closed_form_parts(vacuum, vacuum, geom).Gamma
    for name, value, others in (
        ("tau1", tau1, (tau1_alt, 1j * gamma[0, 0])),
        ("tau2", tau2, (tau2_alt, 1j * gamma[1, 1])),
    ):
        if not all(np.isclose(value, other, rtol=1e-12, atol=0.0) for other in others):
            raise VerificationError(f"{name} expressions disagree: {value} vs {others}")
    return tau1, tau2


def lattice_uncertainty(geom: TorusGeometry, sigma: float) -> float:
    """|τ₁||τ₂|, equal to (θ₀/2)² for every σ."""
    tau1, tau2 = squeezed_vacuum_tau(geom, sigma)
    return abs(tau1) * abs(tau2)
