"""Closed form of the lattice displacement matrix elements.

Completing the square in ∫φ*(q) e^{iβ(q−α/2)/ħ} ψ(q−α) dq gives
log⟨φ|D(α,β)|ψ⟩ as a quadratic polynomial in (α, β) = (mα₀, nβ₀); Γ collects
the quadratic part, η the linear part and ``log_prefactor`` the constant.
DERIVATIONS.md has the algebra.
"""

import math

import numpy as np
from numpy.typing import ArrayLike

from ..torus.schema import TorusGeometry
from .schema import ClosedFormParts, GaussianState


def closed_form_parts(
    probe: GaussianState, signal: GaussianState, geom: TorusGeometry
) -> ClosedFormParts:
    a2 = probe.sigma**2
    b2 = signal.sigma**2
    s2 = a2 + b2
    hbar = geom.hbar
    theta0 = geom.theta0
    qf, pf = probe.q_center, probe.p_center
    qs, ps = signal.q_center, signal.p_center
    dq = qs - qf
    dp = ps - pf

    g11 = theta0**2 * geom.L**2 / (2.0 * math.pi * s2)
    g22 = theta0**2 * geom.P**2 * a2 * b2 / (2.0 * math.pi * hbar**2 * s2)
    # sign fixed by the quadrature oracle, see DERIVATIONS.md
    g12 = -1j * theta0 * (a2 - b2) / (2.0 * s2)
    gamma = np.array([[g11, g12], [g12, g22]], dtype=complex)

    eta_m = (2.0 * math.pi / (geom.P * s2)) * (-hbar * dq - 1j * (pf * a2 + ps * b2))
    eta_n = (2.0 * math.pi / (geom.L * s2)) * (
        1j * (qf * b2 + qs * a2) - a2 * b2 * dp / hbar
    )

    log_norm = 0.5 * math.log(2.0 * probe.sigma * signal.sigma / s2)
    log_prefactor = log_norm + phase_exponent(probe, signal, hbar)
    return ClosedFormParts(
        Gamma=gamma, eta=np.array([eta_m, eta_n]), log_prefactor=log_prefactor
    )


def phase_exponent(
    probe: GaussianState, signal: GaussianState, hbar: float = 1.0
) -> complex:
    """C₀ − B₀²/4A, the (m, n) = (0, 0) exponent left after the Gaussian integral."""
    a2 = probe.sigma**2
    b2 = signal.sigma**2
    qf, pf = probe.q_center, probe.p_center
    qs, ps = signal.q_center, signal.p_center
    c0 = -(qf**2) / (2.0 * a2) - qs**2 / (2.0 * b2) + 1j / (2.0 * hbar) * (
        pf * qf - ps * qs
    )
    b0 = qf / a2 + qs / b2 + 1j / hbar * (ps - pf)
    a = -0.5 * (1.0 / a2 + 1.0 / b2)
    return complex(c0 - b0**2 / (4.0 * a))


def matrix_elements(parts: ClosedFormParts, m: ArrayLike, n: ArrayLike) -> np.ndarray:
    """Vectorized 𝒩e^Φ exp(−π mᵀΓm + ηᵀm) over broadcast index arrays."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    g = parts.Gamma
    quadratic = g[0, 0] * m * m + 2.0 * g[0, 1] * m * n + g[1, 1] * n * n
    linear = parts.eta[0] * m + parts.eta[1] * n
    return np.exp(parts.log_prefactor - np.pi * quadratic + linear)


def matrix_element_closed_form(
    probe: GaussianState, signal: GaussianState, geom: TorusGeometry, m: int, n: int
) -> complex:
    parts = closed_form_parts(probe, signal, geom)
    return complex(matrix_elements(parts, m, n))
