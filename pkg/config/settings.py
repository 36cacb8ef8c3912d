"""Configuration settings for the incompatibility hierarchy toolkit."""

from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class SolverSettings(BaseSettings):
    """Conic backend configuration."""

    model_config = SettingsConfigDict(env_prefix="INCOMPAT_SOLVER_", env_file=".env", extra="ignore")

    tol: float = Field(default=1e-8, gt=0.0, description="Solve tolerance (gap and feasibility)")
    backend: str = Field(default="CLARABEL", description="cvxpy solver used for every SDP")
    fallback_backend: Optional[str] = Field(default="SCS", description="Solver tried when the backend is missing")
    membership_margin: float = Field(default=1e-6, gt=0.0, description="Distance below which membership is declared")
    residual_factor: float = Field(default=100.0, ge=1.0, description="Accepted residual as a multiple of tol")
    verbose: bool = Field(default=False, description="Forward solver output")
    dump_dir: Optional[Path] = Field(
        default=None, description="Write every problem in SDPA format here before solving"
    )

    @field_validator("backend", "fallback_backend")
    @classmethod
    def upper_backend(cls, v):
        """Normalise solver names the way cvxpy spells them."""
        return v.upper() if v else v


class GridSettings(BaseSettings):
    """Epsilon-net grid configuration."""

    model_config = SettingsConfigDict(env_prefix="INCOMPAT_GRID_", env_file=".env", extra="ignore")

    ell: float = Field(default=0.02, gt=0.0, le=1.0, description="Grid step size")
    fast_ell: float = Field(default=0.1, gt=0.0, le=1.0, description="Grid step used in fast mode")
    jobs: int = Field(default=1, ge=1, description="Worker processes for grid and fuzz tasks")
    chunksize: int = Field(default=32, ge=1, description="Grid points handed to a worker at once")


class MultiCopySettings(BaseSettings):
    """n-copy joint measurability configuration."""

    model_config = SettingsConfigDict(env_prefix="INCOMPAT_MULTICOPY_", env_file=".env", extra="ignore")

    max_dim: int = Field(default=16, ge=2, description="Largest allowed d**n")
    trials: int = Field(default=200, ge=1, description="Random states used when replaying a parent")
    seed: int = Field(default=2024, description="Seed for replay states")


class HierarchySettings(BaseSettings):
    """Threshold-chain configuration."""

    model_config = SettingsConfigDict(env_prefix="INCOMPAT_HIERARCHY_", env_file=".env", extra="ignore")

    chain_tol: float = Field(default=1e-4, gt=0.0, description="Slack allowed on every chain inequality")


class LoggingSettings(BaseSettings):
    """Logging configuration."""

    model_config = SettingsConfigDict(env_prefix="INCOMPAT_LOG_", env_file=".env", extra="ignore")

    level: str = Field(default="INFO", description="Logging level")
    format: str = Field(default="text", description="Log format (json or text)")
    file: Optional[Path] = Field(default=None, description="Optional log file")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v):
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return v.upper()

    @field_validator("format")
    @classmethod
    def validate_format(cls, v):
        if v not in ("json", "text"):
            raise ValueError("Log format must be 'json' or 'text'")
        return v


class Settings(BaseSettings):
    """Main settings class."""

    model_config = SettingsConfigDict(
        env_prefix="INCOMPAT_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    solver: SolverSettings = Field(default_factory=SolverSettings)
    grid: GridSettings = Field(default_factory=GridSettings)
    multicopy: MultiCopySettings = Field(default_factory=MultiCopySettings)
    hierarchy: HierarchySettings = Field(default_factory=HierarchySettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next access re-reads the environment."""
    global _settings
    _settings = None
