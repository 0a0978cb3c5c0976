import math
from enum import Enum
from fractions import Fraction
from typing import Any, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class TorusGeometry(BaseModel):
    """Periods of the quantum torus and the action unit."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    L: float = Field(..., gt=0, description="Position period (length units)")
    P: float = Field(..., gt=0, description="Momentum period (momentum units)")
    hbar: float = Field(default=1.0, gt=0, description="Action unit")

    @field_validator("L", "P", "hbar", mode="after")
    @classmethod
    def validate_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("geometry parameters must be finite")
        return value

    @property
    def theta0(self) -> float:
        """Deformation parameter 2πħ/(LP)."""
        return 2.0 * math.pi * self.hbar / (self.L * self.P)

    @property
    def alpha0(self) -> float:
        """Lattice spacing in position, 2πħ/P."""
        return 2.0 * math.pi * self.hbar / self.P

    @property
    def beta0(self) -> float:
        """Lattice spacing in momentum, 2πħ/L."""
        return 2.0 * math.pi * self.hbar / self.L

    def scaled(self, c: float) -> "TorusGeometry":
        return TorusGeometry(L=c * self.L, P=c * self.P, hbar=self.hbar)


class TorusCharacter(BaseModel):
    """Plane-wave character χ_{m,n} carrying a unit-modulus phase."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    m: int
    n: int
    phase: complex = 1.0 + 0.0j

    @field_validator("phase", mode="after")
    @classmethod
    def validate_unit_phase(cls, value: complex) -> complex:
        if not math.isclose(abs(value), 1.0, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError(f"character phase must have unit modulus, got {value}")
        return value


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # 0.5 -> 1/2 exactly; arbitrary floats are limited to a sane denominator
        return Fraction(value).limit_denominator(1_000_000)
    return Fraction(str(value).strip())


class ThetaCharacteristic(BaseModel):
    """Shifts [ε; δ] of a genus-1 or genus-2 theta function, stored exactly."""

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    epsilon: Tuple[Fraction, ...] = (Fraction(0), Fraction(0))
    delta: Tuple[Fraction, ...] = (Fraction(0), Fraction(0))

    @field_validator("epsilon", "delta", mode="before")
    @classmethod
    def validate_rationals(cls, value: Any) -> Tuple[Fraction, ...]:
        if isinstance(value, str):
            value = [v for v in value.replace(" ", "").split(",") if v]
        entries = tuple(_to_fraction(v) for v in value)
        if len(entries) not in (1, 2):
            raise ValueError("characteristic vectors have one or two entries")
        return entries

    @model_validator(mode="after")
    def validate_genus(self) -> "ThetaCharacteristic":
        if len(self.epsilon) != len(self.delta):
            raise ValueError("epsilon and delta must have the same length")
        return self

    @classmethod
    def zero(cls, genus: int = 2) -> "ThetaCharacteristic":
        return cls(epsilon=(Fraction(0),) * genus, delta=(Fraction(0),) * genus)

    @classmethod
    def half(cls, genus: int = 2) -> "ThetaCharacteristic":
        half = (Fraction(1, 2),) * genus
        return cls(epsilon=half, delta=half)

    @property
    def genus(self) -> int:
        return len(self.epsilon)

    @classmethod
    def parse(cls, text: str) -> "ThetaCharacteristic":
        """Parse ``"e1,e2;d1,d2"`` (entries like ``0``, ``1/2``, ``0.5``)."""
        try:
            eps_text, delta_text = text.split(";")
        except ValueError:
            raise ValueError(f"characteristic must look like 'e1,e2;d1,d2', got {text!r}")
        return cls(epsilon=eps_text, delta=delta_text)

    @property
    def is_zero(self) -> bool:
        return not any(self.epsilon) and not any(self.delta)

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Float views, only for theta evaluation."""
        return (
            np.array([float(e) for e in self.epsilon]),
            np.array([float(d) for d in self.delta]),
        )

    def label(self) -> str:
        eps = ",".join(str(e) for e in self.epsilon)
        delta = ",".join(str(d) for d in self.delta)
        return f"{eps};{delta}"
