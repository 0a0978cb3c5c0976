"""Certified truncation radii for theta lattice sums.

Terms are summed over the box ‖m − m₀‖_∞ ≤ R around the lattice point m₀
nearest the Gaussian center, so every discarded shifted point v satisfies
‖v‖_∞ ≥ R + 1/2. With λ the smallest eigenvalue of Im(Ω),

    Σ_{‖v‖_∞ ≥ ρ} e^{−πλ|v|²} ≤ g · T(ρ) · (1 + 1/√λ)^{g−1},
    T(ρ) = 2e^{−πλρ²} + erfc(ρ√(πλ))/√λ,

where the one-dimensional sums are compared against their integrals.
"""

import numpy as np
from scipy.special import erfc

from ..config import settings
from ..errors import DomainError, ThetaCapacityError
from .schema import PeriodMatrix


def _tail_bounds(lam: float, genus: int, radii: np.ndarray) -> np.ndarray:
    rho = np.asarray(radii, dtype=float) + 0.5
    one_sided = 2.0 * np.exp(-np.pi * lam * rho**2) + erfc(
        rho * np.sqrt(np.pi * lam)
    ) / np.sqrt(lam)
    return genus * one_sided * (1.0 + 1.0 / np.sqrt(lam)) ** (genus - 1)


def tail_bound(Omega: PeriodMatrix, radius: int) -> float:
    """Bound on the scaled magnitude of all terms outside the radius-R box."""
    if radius < 0:
        raise DomainError(f"radius must be non-negative, got {radius}")
    return float(_tail_bounds(Omega.min_eigenvalue, Omega.genus, np.array([radius]))[0])


def truncation_radius(Omega: PeriodMatrix, tol: float) -> int:
    """Smallest R whose certified tail bound is below ``tol``."""
    if not 0.0 < tol < 1.0:
        raise DomainError(f"tolerance must lie in (0, 1), got {tol}")
    cap = settings.theta_radius_cap
    bounds = _tail_bounds(Omega.min_eigenvalue, Omega.genus, np.arange(cap + 1))
    admissible = np.flatnonzero(bounds < tol)
    if admissible.size == 0:
        raise ThetaCapacityError(
            f"certified radius for tol={tol:g} exceeds the cap R <= {cap} "
            f"(smallest eigenvalue of Im(Omega) is {Omega.min_eigenvalue:.3g})"
        )
    return int(admissible[0])
