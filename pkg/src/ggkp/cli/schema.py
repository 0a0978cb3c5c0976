import math
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import settings
from ..gaussian.schema import GaussianState
from ..torus.schema import ThetaCharacteristic, TorusGeometry
from ..zak.schema import GridSpec


class RunConfig(BaseModel):
    """Parameters of one CLI run, loaded from a config file plus flag overrides."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    hbar: float = Field(default=1.0, gt=0, description="Reduced Planck constant")
    L: float = Field(default=2.0 * math.pi, gt=0, description="Position period")
    P: float = Field(default=2.0 * math.pi, gt=0, description="Momentum period")
    probe: GaussianState = Field(default_factory=GaussianState)
    signal: GaussianState = Field(default_factory=GaussianState)
    grid: GridSpec = Field(default_factory=GridSpec)
    tolerance: Optional[float] = Field(
        default=None, description="Theta tolerance, defaults to GGKP_TOL"
    )
    characteristic: ThetaCharacteristic = Field(
        default_factory=ThetaCharacteristic.zero
    )
    logical_sigma: float = Field(
        default=1.0, gt=0, description="Squeezed-vacuum width of the logical states"
    )
    resolution: int = Field(
        default=512, description="Per-axis samples of the doubled-cell overlap"
    )
    scales: List[float] = Field(
        default_factory=lambda: [1.0, 2.0, 4.0, 8.0],
        description="Lattice scale factors of the flat-limit scan",
    )

    @field_validator("characteristic", mode="before")
    @classmethod
    def validate_characteristic(cls, value: Any) -> Any:
        if isinstance(value, str):
            return ThetaCharacteristic.parse(value)
        return value

    @field_validator("tolerance", mode="after")
    @classmethod
    def validate_tolerance(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not 0.0 < value < 1.0:
            raise ValueError("tolerance must lie in (0, 1)")
        return value

    @model_validator(mode="after")
    def validate_geometry(self) -> "RunConfig":
        self.geometry()
        if self.characteristic.genus != 2:
            raise ValueError("the transform needs a two-component characteristic")
        return self

    def geometry(self) -> TorusGeometry:
        return TorusGeometry(L=self.L, P=self.P, hbar=self.hbar)

    @property
    def tol(self) -> float:
        return settings.tol if self.tolerance is None else self.tolerance


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    passed: bool
    max_error: float = Field(..., description="Largest observed error measure")
    threshold: float
    cases: int


class VerifyReport(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    suite: str
    seed: int
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]
