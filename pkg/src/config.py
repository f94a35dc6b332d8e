"""
Configuration management for the phase tropical isotopy toolkit.
"""
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables
load_dotenv()


class Settings(BaseSettings):
    """Application settings with environment variable loading.

    Only ambient behaviour (logging) is read from the environment; every
    numeric default lives in ``Tolerances`` so output files never depend on it.
    """

    model_config = SettingsConfigDict(env_prefix="ISOTOPY_", env_file=".env", extra="ignore")

    app_title: str = "Phase Tropical Isotopy"
    app_version: str = "1.0.0"

    # Logging
    log_level: str = "INFO"
    log_json: bool = False
    log_stream: str = "stderr"

    def validate_settings(self) -> bool:
        """Validate logging knobs."""
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if self.log_level.upper() not in valid_levels:
            raise ValueError(f"Invalid ISOTOPY_LOG_LEVEL: {self.log_level}")
        if self.log_stream not in ("stderr", "stdout"):
            raise ValueError(f"Invalid ISOTOPY_LOG_STREAM: {self.log_stream}")
        return True


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    settings = Settings()
    settings.validate_settings()
    return settings


class Tolerances(BaseModel):
    """Numeric defaults shared by the geometry, isotopy and verification layers."""

    model_config = ConfigDict(frozen=True)

    h_tol: float = Field(1e-9, gt=0, description="line residual below which a point is on H")
    boundary_tol: float = Field(1e-12, gt=0, description="tie tolerance for region boundaries")
    corner_tol: float = Field(1e-12, gt=0, description="distance from a centre-to-corner ray treated as on it")
    root_tol: float = Field(1e-10, gt=0, description="bisection tolerance in ray parameter")
    seam_tol: float = Field(1e-8, gt=0, description="allowed branch disagreement on seams")
    endpoint_tol: float = Field(1e-8, gt=0, description="allowed distance of the t=1 image to H_trop")
    identity_tol: float = Field(1e-12, gt=0, description="allowed displacement at t=0")
    membership_tol: float = Field(1e-9, gt=0, description="closed-triangle membership slack")
    grid_margin: float = Field(1e-6, gt=0, description="distance kept from open-set boundaries")
    leg_cutoff: float = Field(10.0, gt=0, description="samples keep |x|, |y| within this bound")
    injectivity_delta: float = Field(0.05, gt=0)
    injectivity_eps: float = Field(1e-6, gt=0)
    stretch_limit: float = Field(1e3, gt=0)


TOLERANCES = Tolerances()
