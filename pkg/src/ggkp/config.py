from pathlib import Path
from typing import Any

from loguru import logger
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Numerical tolerances
    tol: float = Field(
        default=1e-10, description="Default certified tolerance for theta sums"
    )
    abs_floor: float = Field(
        default=1e-14, description="Absolute floor used in relative comparisons"
    )

    # Quadrature Configuration
    quad_node_count: int = Field(
        default=64, description="Initial node count of the composite rule"
    )
    quad_half_width_sigmas: float = Field(
        default=8.0, description="Integration window half width in Gaussian widths"
    )
    quad_max_nodes: int = Field(
        default=2**20, description="Node cap for quadrature refinement"
    )

    # Theta Configuration
    theta_radius_cap: int = Field(
        default=10_000, description="Largest lattice radius a theta sum may use"
    )
    inversion_threshold: float = Field(
        default=0.05, description="Im(tau) below which theta3 uses modular inversion"
    )

    # Output Configuration
    output_dir: Path = Field(
        default=Path("out"), description="Directory for emitted grids and reports"
    )
    log_level: str = Field(default="WARNING", description="stderr log level")

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", env_prefix="GGKP_", extra="ignore"
    )

    @field_validator("tol", mode="after")
    @classmethod
    def validate_tol(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("tolerance must lie in (0, 1)")
        return value

    @field_validator("output_dir", mode="before")
    @classmethod
    def validate_paths(cls, value: Any) -> Path:
        if value is None or (isinstance(value, str) and not value.strip()):
            return Path("out")
        return Path(value)

    @field_validator("log_level", mode="after")
    @classmethod
    def validate_log_level(cls, value: str) -> str:
        return value.upper()


def reload_settings() -> Settings:
    """Re-read the environment into the shared ``settings`` instance.

    Raises ``ValidationError`` when a ``GGKP_`` variable is invalid; the
    instance is left unchanged in that case.
    """
    fresh = Settings()
    for name in Settings.model_fields:
        setattr(settings, name, getattr(fresh, name))
    return settings


try:
    settings = Settings()
except ValidationError as e:
    # library imports keep working; the CLI reports the error via reload_settings()
    logger.warning(f"invalid GGKP_ environment, using defaults: {e.error_count()} errors")
    settings = Settings.model_construct()
