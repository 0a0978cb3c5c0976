from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..gaussian.schema import ClosedFormParts
from ..theta.schema import PeriodMatrix
from ..torus.schema import ThetaCharacteristic, TorusGeometry


class QZTDistribution(BaseModel):
    """Quantum Zak transform ⟨φ,ψ⟩(x,k) = 𝒩e^Φ Θ[ε;δ](ξ|Ω) with Ω = iΓ."""

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    geom: TorusGeometry
    parts: ClosedFormParts
    char: ThetaCharacteristic
    Omega: PeriodMatrix
    xi_offset: np.ndarray = Field(..., description="η/(2πi), added to (−α₀k, β₀x)")

    @field_validator("xi_offset", mode="before")
    @classmethod
    def validate_offset(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=complex)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def validate_period_matrix(self) -> "QZTDistribution":
        if self.xi_offset.shape != (2,):
            raise ValueError("xi offset must be a 2-vector")
        if self.Omega.genus != 2 or self.char.genus != 2:
            raise ValueError("the transform lives on a genus-2 theta function")
        if not np.array_equal(self.Omega.Omega, 1j * self.parts.Gamma):
            raise ValueError("Omega must equal i*Gamma")
        return self

    @property
    def prefactor(self) -> complex:
        return self.parts.prefactor


class LogicalState(BaseModel):
    """|0⟩_L ↔ Θ[0;0], |1⟩_L ↔ Θ[½,½;½,½] on a squeezed-vacuum transform."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    bit: Literal[0, 1]
    distribution: QZTDistribution

    @model_validator(mode="after")
    def validate_characteristic(self) -> "LogicalState":
        expected = ThetaCharacteristic.zero() if self.bit == 0 else ThetaCharacteristic.half()
        if self.distribution.char != expected:
            raise ValueError(
                f"logical {self.bit} needs characteristic [{expected.label()}]"
            )
        return self


class GridSpec(BaseModel):
    """Rectangular (x, k) window; endpoints are included."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x_min: float = -0.5
    x_max: float = 0.5
    k_min: float = -0.5
    k_max: float = 0.5
    nx: int = Field(default=65, ge=1)
    nk: int = Field(default=65, ge=1)

    @model_validator(mode="after")
    def validate_window(self) -> "GridSpec":
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if not self.k_max > self.k_min:
            raise ValueError("k_max must exceed k_min")
        if self.nx * self.nk > 10**8:
            raise ValueError(f"grid has {self.nx * self.nk} points, the limit is 1e8")
        return self

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def ks(self) -> np.ndarray:
        return np.linspace(self.k_min, self.k_max, self.nk)


class OverlapReport(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    resolution: int
    value: complex
    half_resolution_value: complex
    richardson_error: float


class FlatLimitPoint(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    scale: float
    fwhm: float = Field(..., description="Full width at half maximum in xi_2 units")
    peak_center: float
