"""
Numeric defaults using Pydantic Settings.
Loads environment variables (prefix WAVEFRONT_) and an optional .env file.
"""
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Solver settings loaded from environment variables."""
    
    model_config = SettingsConfigDict(
        env_prefix="WAVEFRONT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )
    
    # Tolerances
    default_tol: float = Field(default=1e-4, description="Bisection tolerance on the wave speed")
    exponent_margin: float = Field(default=1e-3, description="Margin around borderline power exponents")
    limit_rtol: float = Field(default=1e-4, description="Relative agreement of successive limit extrapolants")
    ode_rtol: float = Field(default=1e-10, description="Relative tolerance of the ODE integrators")
    ode_atol: float = Field(default=1e-12, description="Absolute tolerance of the ODE integrators")
    
    # Grids
    hypothesis_grid: int = Field(default=1024, description="Points used to check the standing hypotheses")
    bounds_grid: int = Field(default=4096, description="Points used for running means in the speed bracket")
    limit_levels: tuple[int, int] = Field(default=(8, 24), description="Dyadic levels u=2^-j sampled for endpoint limits")
    fit_levels: tuple[int, int] = Field(default=(10, 20), description="Dyadic levels used by power fits")
    samples_per_decade: int = Field(default=40, description="Reduced-solution samples per decade near each endpoint")
    
    # Integration window
    startup_eps: float = Field(default=1e-6, description="Distance from u=1 where backward shots start")
    u_floor: float = Field(default=1e-6, description="Smallest u reached by backward shots")
    z_floor_factor: float = Field(default=1e-12, description="Relative floor below which z counts as zero")
    max_bracket_expansions: int = Field(default=8, description="Upper bracket doublings before giving up")
    monotonicity_checks: int = Field(default=4, ge=0, description="Shots below the final c* bracket that must miss the origin")
    
    # Profile checks
    profile_step: float = Field(default=5e-3, description="Uniform time step of reconstructed profiles")
    residual_threshold: float = Field(default=1e-6, description="Profile residual threshold relative to max rho")
    flux_threshold: float = Field(default=1e-4, description="Flux bound at the extreme profile samples")
    
    # Sweeps
    sweep_workers: int = Field(default=1, description="Worker processes used by sweeps")
    
    # Logging Configuration
    log_level: str = Field(default="INFO", description="Logging level")
    json_logs: bool = Field(default=False, description="Emit JSON formatted logs")
    
    @property
    def fit_exponents(self) -> range:
        """Dyadic exponents j of the power-fit grid."""
        return range(self.fit_levels[0], self.fit_levels[1] + 1)
    
    @property
    def limit_exponents(self) -> range:
        """Dyadic exponents j of the limit sampling grid."""
        return range(self.limit_levels[0], self.limit_levels[1] + 1)


# Global settings instance
settings = Settings()
