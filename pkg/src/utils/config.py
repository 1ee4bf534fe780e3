# src/utils/config.py

from typing import Tuple

from pydantic import computed_field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

LOG_LEVELS = ("debug", "info", "warning", "error", "critical")


def parse_grid_string(text: str) -> Tuple[int, float, float]:
    """Parse an ``M:lo:hi`` grid string into (count, lo, hi)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"Grid must look like M:lo:hi, got {text!r}")
    count = int(parts[0])
    lo, hi = float(parts[1]), float(parts[2])
    if count < 2:
        raise ValueError(f"Grid count must be at least 2, got {count}")
    if hi <= lo:
        raise ValueError(f"Grid upper edge must exceed lower edge, got {lo} and {hi}")
    return count, lo, hi


class Settings(BaseSettings):
    """Laboratory configuration using Pydantic Settings."""

    # Parallelism
    threads: int = 1

    # Tolerances
    identity_tol: float = 1e-3
    equality_tol: float = 1e-3
    decay_threshold: float = 1e-6
    spectral_edge_error: float = 1e-3
    unit_modulus_tol: float = 1e-9
    phase_match_tol: float = 1e-6
    mask_threshold: float = 1e-12

    # Engine limits
    tabulated_max_nodes: int = 64

    # Defaults for CLI runs
    default_grid: str = "256:-8:8"

    # Application configuration
    log_level: str = "info"

    # Plan cache
    cache_maxsize: int = 32
    cache_ttl: int = 3600

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v):
        if v < 1:
            raise ValueError("TFU_THREADS must be at least 1")
        return v

    @field_validator(
        "identity_tol",
        "equality_tol",
        "decay_threshold",
        "spectral_edge_error",
        "unit_modulus_tol",
        "phase_match_tol",
        "mask_threshold",
    )
    @classmethod
    def validate_positive_tolerance(cls, v, info):
        if not v > 0:
            raise ValueError(f"{info.field_name} must be positive, got {v}")
        return v

    @field_validator("tabulated_max_nodes")
    @classmethod
    def validate_tabulated_max_nodes(cls, v):
        if v < 2:
            raise ValueError("tabulated_max_nodes must be at least 2")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        level = v.lower()
        if level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        return level

    @field_validator("default_grid")
    @classmethod
    def validate_default_grid(cls, v):
        parse_grid_string(v)
        return v

    @computed_field
    @property
    def grid_parts(self) -> Tuple[int, float, float]:
        """Default grid as (count, lo, hi)."""
        return parse_grid_string(self.default_grid)

    def validate_configuration(self) -> bool:
        """Validate that the configuration is coherent as a whole."""
        errors = []

        if self.equality_tol > 0.1:
            errors.append("EQUALITY_TOL above 0.1 makes every verdict an equality")
        if self.identity_tol > 0.1:
            errors.append("IDENTITY_TOL above 0.1 accepts residuals no check can distinguish")
        if self.decay_threshold >= self.spectral_edge_error:
            errors.append("DECAY_THRESHOLD must be smaller than SPECTRAL_EDGE_ERROR")
        if self.cache_maxsize < 1:
            errors.append("CACHE_MAXSIZE must be at least 1")
        if self.cache_ttl < 1:
            errors.append("CACHE_TTL must be at least 1 second")

        if errors:
            raise ValueError(f"Configuration validation failed: {', '.join(errors)}")

        return True

    model_config = SettingsConfigDict(
        env_prefix="TFU_",
        env_file=[
            ".env",
            "env/development.env",
            "env/ci.env",
        ],
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


def get_settings() -> Settings:
    """Get laboratory settings instance."""
    return Settings()


# Global settings instance
settings = get_settings()
