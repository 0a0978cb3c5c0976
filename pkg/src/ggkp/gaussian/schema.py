import math
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import settings


class GaussianState(BaseModel):
    """Displaced squeezed state with real width (squeeze angle zero)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    q_center: float = Field(default=0.0, description="Position center (length)")
    p_center: float = Field(default=0.0, description="Momentum center (momentum)")
    sigma: float = Field(
        default=1.0, ge=1e-3, description="Gaussian width in position (length)"
    )

    @field_validator("q_center", "p_center", "sigma", mode="after")
    @classmethod
    def validate_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("state parameters must be finite")
        return value

    @classmethod
    def vacuum(cls, sigma: float = 1.0) -> "GaussianState":
        return cls(sigma=sigma)

    @classmethod
    def from_squeezing(
        cls, r: float, q_center: float = 0.0, p_center: float = 0.0, hbar: float = 1.0
    ) -> "GaussianState":
        """Width σ = √ħ·e^{−r} for squeezing magnitude r (unit mass and frequency)."""
        return cls(q_center=q_center, p_center=p_center, sigma=math.sqrt(hbar) * math.exp(-r))


class QuadConfig(BaseModel):
    """Composite trapezoid settings for the matrix-element oracle."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    half_width_sigmas: float = Field(
        default_factory=lambda: settings.quad_half_width_sigmas,
        ge=8.0,
        description="Window half width beyond the outermost center, in widths",
    )
    node_count: int = Field(
        default_factory=lambda: settings.quad_node_count,
        ge=64,
        description="Initial number of panels",
    )
    max_nodes: int = Field(
        default_factory=lambda: settings.quad_max_nodes,
        description="Refinement stops with a resolution error past this many panels",
    )
    refine: bool = Field(default=True, description="Double nodes until converged")
    rtol: float = Field(
        default=1e-10, gt=0, description="Convergence threshold between refinements"
    )

    @model_validator(mode="after")
    def validate_cap(self) -> "QuadConfig":
        if self.max_nodes < self.node_count:
            raise ValueError("max_nodes must be at least node_count")
        return self


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


class ClosedFormParts(BaseModel):
    """Γ, η and log(𝒩e^Φ) of ⟨φ|D(mα₀,nβ₀)|ψ⟩ = 𝒩e^Φ exp(−π mᵀΓm + ηᵀm)."""

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    Gamma: np.ndarray
    eta: np.ndarray
    log_prefactor: complex

    @field_validator("Gamma", "eta", mode="before")
    @classmethod
    def validate_array(cls, value: Any) -> np.ndarray:
        return _readonly(value)

    @model_validator(mode="after")
    def validate_shapes(self) -> "ClosedFormParts":
        if self.Gamma.shape != (2, 2) or self.eta.shape != (2,):
            raise ValueError("Gamma must be 2x2 and eta a 2-vector")
        if self.Gamma[0, 1] != self.Gamma[1, 0]:
            raise ValueError("Gamma must be symmetric")
        if self.Gamma[0, 0].real <= 0 or self.Gamma[1, 1].real <= 0:
            raise ValueError("diagonal of Gamma must have positive real part")
        return self

    @property
    def prefactor(self) -> complex:
        return complex(np.exp(self.log_prefactor))
