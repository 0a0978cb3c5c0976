import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import GeometryError


class PeriodMatrix(BaseModel):
    """Symmetric genus-1 or genus-2 period matrix with Im(Ω) positive-definite."""

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    Omega: np.ndarray

    @field_validator("Omega", mode="before")
    @classmethod
    def validate_array(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=complex)
        if array.ndim == 0:
            array = array.reshape(1, 1)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def validate_period_matrix(self) -> "PeriodMatrix":
        omega = self.Omega
        if omega.shape not in ((1, 1), (2, 2)):
            raise GeometryError(f"period matrix must be 1x1 or 2x2, got {omega.shape}")
        if not np.all(np.isfinite(omega)):
            raise GeometryError("period matrix entries must be finite")
        if omega[0, -1] != omega[-1, 0]:
            raise GeometryError("period matrix must be symmetric")
        eigenvalues = np.linalg.eigvalsh(omega.imag)
        if eigenvalues.min() <= 0:
            raise GeometryError(
                f"Im(Omega) is not positive-definite (eigenvalues {eigenvalues})"
            )
        return self

    @classmethod
    def from_tau(cls, tau: complex) -> "PeriodMatrix":
        return cls(Omega=[[tau]])

    @classmethod
    def diagonal(cls, tau1: complex, tau2: complex) -> "PeriodMatrix":
        return cls(Omega=[[tau1, 0.0], [0.0, tau2]])

    @property
    def genus(self) -> int:
        return self.Omega.shape[0]

    @property
    def imag(self) -> np.ndarray:
        return self.Omega.imag

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.Omega.imag).min())

    @property
    def is_diagonal(self) -> bool:
        return self.genus == 1 or self.Omega[0, 1] == 0


class ThetaValue(BaseModel):
    """A truncated theta sum with its certificate.

    ``tail_bound`` bounds the discarded terms after dividing by
    e^{log_scale}; the absolute error is ``error_bound``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    value: complex
    truncation_radius: int = Field(..., ge=0)
    tail_bound: float = Field(..., ge=0)
    log_scale: float = 0.0
    tolerance: Optional[float] = None
    inverted: bool = False

    @model_validator(mode="after")
    def validate_certificate(self) -> "ThetaValue":
        if self.tolerance is not None and self.tail_bound > self.tolerance:
            raise ValueError("tail bound exceeds the requested tolerance")
        return self

    @property
    def error_bound(self) -> float:
        return self.tail_bound * math.exp(self.log_scale)
