import cmath
import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..config import settings
from ..errors import DomainError
from ..torus.schema import ThetaCharacteristic
from .bounds import tail_bound, truncation_radius
from .schema import PeriodMatrix, ThetaValue

# complex terms held in memory per block
_BLOCK = 1 << 20


def _scaled_sums(
    omega: np.ndarray,
    xis: np.ndarray,
    epsilon: np.ndarray,
    delta: np.ndarray,
    radius: int,
    compensated: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """Σ exp(πi vᵀΩv + 2πi vᵀ(ξ+δ)) / e^{log_scale} over the centered box.

    v = m + ε runs over the (2R+1)^g lattice points nearest the Gaussian center
    −Im(Ω)⁻¹Im(ξ); dividing by e^{log_scale} keeps every term at most 1 in
    modulus. Returns the scaled sums and log_scale per point.
    """
    genus = omega.shape[0]
    y = omega.imag
    centers = np.linalg.solve(y, xis.imag.T).T
    log_scale = np.pi * np.einsum("ni,ij,nj->n", centers, y, centers)
    base = np.rint(-centers - epsilon) + epsilon
    shifted = xis + delta

    width = 2 * radius + 1
    total = width**genus
    box_block = min(total, _BLOCK)
    point_block = max(1, _BLOCK // box_block)
    sums = np.empty(xis.shape[0], dtype=complex)

    for p0 in range(0, xis.shape[0], point_block):
        rows = slice(p0, p0 + point_block)
        real_parts = []
        imag_parts = []
        acc = np.zeros(base[rows].shape[0], dtype=complex)
        for t0 in range(0, total, box_block):
            index = np.arange(t0, min(t0 + box_block, total))
            offsets = np.stack(np.unravel_index(index, (width,) * genus), axis=-1)
            v = base[rows, None, :] + (offsets - radius)[None, :, :]
            quadratic = np.einsum("ntj,jk,ntk->nt", v, omega, v)
            linear = np.einsum("ntj,nj->nt", v, shifted[rows])
            terms = np.exp(
                1j * np.pi * quadratic + 2j * np.pi * linear - log_scale[rows, None]
            )
            if compensated:
                real_parts.append(terms.real)
                imag_parts.append(terms.imag)
            else:
                acc += terms.sum(axis=1)
        if compensated:
            re = np.concatenate(real_parts, axis=1)
            im = np.concatenate(imag_parts, axis=1)
            acc = np.array(
                [complex(math.fsum(r), math.fsum(i)) for r, i in zip(re, im)]
            )
        sums[rows] = acc
    return sums, log_scale


def _as_xi(xi: ArrayLike, genus: int) -> np.ndarray:
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    if xi.shape[-1] != genus:
        raise DomainError(f"argument must have {genus} components, got shape {xi.shape}")
    if not np.all(np.isfinite(xi)):
        raise DomainError("theta argument must be finite")
    return xi


def _characteristic(
    char: Optional[ThetaCharacteristic], genus: int
) -> Tuple[np.ndarray, np.ndarray]:
    char = char or ThetaCharacteristic.zero(genus)
    if char.genus != genus:
        raise DomainError(
            f"characteristic [{char.label()}] does not match genus {genus}"
        )
    return char.as_arrays()


def riemann_theta(
    xi: ArrayLike,
    Omega: PeriodMatrix,
    char: Optional[ThetaCharacteristic] = None,
    tol: Optional[float] = None,
    radius: Optional[int] = None,
) -> ThetaValue:
    """Θ[ε;δ](ξ|Ω) = Σ_m exp(πi(m+ε)ᵀΩ(m+ε) + 2πi(m+ε)ᵀ(ξ+δ)).

    The radius is certified from ``tol`` unless given explicitly, in which case
    the returned tail bound is the one for that radius.
    """
    xi = _as_xi(xi, Omega.genus)
    epsilon, delta = _characteristic(char, Omega.genus)
    tol = settings.tol if tol is None else tol
    tolerance: Optional[float] = None
    if radius is None:
        radius = truncation_radius(Omega, tol)
        tolerance = tol
    bound = tail_bound(Omega, radius)

    sums, log_scale = _scaled_sums(
        Omega.Omega, xi[None, :], epsilon, delta, radius, compensated=True
    )
    logger.debug(f"riemann theta: radius={radius} tail_bound={bound:.3g}")
    return ThetaValue(
        value=complex(sums[0] * np.exp(log_scale[0])),
        truncation_radius=radius,
        tail_bound=bound,
        log_scale=float(log_scale[0]),
        tolerance=tolerance,
    )


def riemann_theta_array(
    xis: ArrayLike,
    Omega: PeriodMatrix,
    char: Optional[ThetaCharacteristic] = None,
    tol: Optional[float] = None,
) -> np.ndarray:
    """Θ[ε;δ] at every ξ along the last axis of ``xis``."""
    xis = _as_xi(xis, Omega.genus)
    epsilon, delta = _characteristic(char, Omega.genus)
    radius = truncation_radius(Omega, settings.tol if tol is None else tol)
    flat = xis.reshape(-1, Omega.genus)
    sums, log_scale = _scaled_sums(Omega.Omega, flat, epsilon, delta, radius)
    return (sums * np.exp(log_scale)).reshape(xis.shape[:-1])


def _theta3(
    z: np.ndarray,
    tau: complex,
    tol: Optional[float],
    inversion: Optional[bool],
    compensated: bool,
) -> Tuple[np.ndarray, int, float, np.ndarray, bool]:
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"tau {tau} is not in the upper half-plane")
    if not np.all(np.isfinite(z)):
        raise DomainError("theta argument must be finite")
    tol = settings.tol if tol is None else tol

    # ϑ₃(z, τ+2) = ϑ₃(z, τ)
    tau = tau - 2.0 * round(tau.real / 2.0)
    if inversion is None:
        inversion = (
            tau.imag < settings.inversion_threshold and (-1.0 / tau).imag > tau.imag
        )

    if inversion:
        # ϑ₃(z|τ) = (−iτ)^{−1/2} e^{−πiz²/τ} ϑ₃(z/τ | −1/τ)
        log_prefactor = -0.5 * cmath.log(-1j * tau) - 1j * np.pi * z**2 / tau
        z, tau = z / tau, -1.0 / tau
    else:
        log_prefactor = np.zeros_like(z)

    period = PeriodMatrix.from_tau(tau)
    radius = truncation_radius(period, tol)
    bound = tail_bound(period, radius)
    zero = np.zeros(1)
    sums, log_scale = _scaled_sums(
        period.Omega, z[:, None], zero, zero, radius, compensated
    )
    total_log = log_prefactor + log_scale
    logger.debug(
        f"theta3: tau={tau:.6g} inverted={inversion} radius={radius} "
        f"tail_bound={bound:.3g}"
    )
    return sums * np.exp(total_log), radius, bound, total_log.real, inversion


def jacobi_theta3(
    z: complex,
    tau: complex,
    tol: Optional[float] = None,
    inversion: Optional[bool] = None,
) -> ThetaValue:
    """ϑ₃(z, τ) = Σ_n exp(iπτn² + 2πizn).

    Below Im(τ) = ``settings.inversion_threshold`` the sum is taken on the
    modular image −1/τ; ``inversion`` forces either path.
    """
    tol = settings.tol if tol is None else tol
    values, radius, bound, log_scale, inverted = _theta3(
        np.array([complex(z)]), tau, tol, inversion, compensated=True
    )
    return ThetaValue(
        value=complex(values[0]),
        truncation_radius=radius,
        tail_bound=bound,
        log_scale=float(log_scale[0]),
        tolerance=tol,
        inverted=inverted,
    )


def jacobi_theta3_array(
    z: ArrayLike, tau: complex, tol: Optional[float] = None
) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    values, *_ = _theta3(z.ravel(), tau, tol, None, compensated=False)
    return values.reshape(z.shape)


def diagonal_factorization_check(
    Omega: PeriodMatrix, xi: ArrayLike, tol: Optional[float] = None
) -> Tuple[complex, complex]:
    """Θ(ξ|diag(τ₁,τ₂)) next to ϑ₃(ξ₁,τ₁)·ϑ₃(ξ₂,τ₂)."""
    if Omega.genus != 2 or not Omega.is_diagonal:
        raise DomainError("factorization check needs a diagonal 2x2 period matrix")
    xi = _as_xi(xi, 2)
    genus2 = riemann_theta(xi, Omega, tol=tol).value
    product = (
        jacobi_theta3(xi[0], Omega.Omega[0, 0], tol).value
        * jacobi_theta3(xi[1], Omega.Omega[1, 1], tol).value
    )
    return genus2, product
