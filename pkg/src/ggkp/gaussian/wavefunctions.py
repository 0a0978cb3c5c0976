from typing import Callable, Union

import numpy as np
from numpy.typing import ArrayLike

from ..torus.schema import TorusGeometry
from .schema import GaussianState

Ket = Callable[[np.ndarray], np.ndarray]


def wavefunction(
    state: GaussianState, q: ArrayLike, hbar: float = 1.0
) -> Union[complex, np.ndarray]:
    """ψ(q) = (πσ²)^{−1/4} exp[−(q−q_c)²/2σ² + (i/ħ)p_c(q − q_c/2)].

    Probe states use the same form; conjugation happens inside the overlap.
    """
    q = np.asarray(q, dtype=float)
    norm = (np.pi * state.sigma**2) ** -0.25
    exponent = -((q - state.q_center) ** 2) / (2.0 * state.sigma**2) + 1j * (
        state.p_center / hbar
    ) * (q - state.q_center / 2.0)
    return _scalar_or_array(norm * np.exp(exponent))


def displace(ket: Ket, m: int, n: int, geom: TorusGeometry) -> Ket:
    """D(mα₀, nβ₀) acting in the position basis."""
    alpha_m = m * geom.alpha0
    beta_n = n * geom.beta0

    def displaced(q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        return np.exp(1j * beta_n * (q - alpha_m / 2.0) / geom.hbar) * ket(q - alpha_m)

    return displaced


def state_ket(state: GaussianState, hbar: float) -> Ket:
    return lambda q: wavefunction(state, q, hbar)


def displaced_wavefunction(
    state: GaussianState, m: int, n: int, geom: TorusGeometry, q: ArrayLike
) -> Union[complex, np.ndarray]:
    ket = displace(state_ket(state, geom.hbar), m, n, geom)
    return _scalar_or_array(ket(np.asarray(q, dtype=float)))


def _scalar_or_array(values: np.ndarray) -> Union[complex, np.ndarray]:
    return complex(values) if values.ndim == 0 else values
