"""Configuration management for the linear open quantum system simulator"""
from pydantic import BaseModel, ConfigDict
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Operational settings loaded from environment variables

    Only diagnostics depend on these; numeric results never do.
    """

    LOG_LEVEL: str = "INFO"
    DEBUG: bool = False

    model_config = SettingsConfigDict(
        env_prefix="LOQS_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


class Tolerances(BaseModel):
    """Numeric thresholds shared by every engine"""

    model_config = ConfigDict(frozen=True)

    # core-model
    SYM_TOL: float = 1e-10
    REAL_CAST_TOL: float = 1e-12
    PSD_TOL: float = 1e-10

    # moment-dynamics
    HURWITZ_TOL: float = 1e-10
    PHYS_TOL: float = 1e-9

    # fock-oracle
    OPERATOR_HERMITIAN_TOL: float = 1e-12
    DENSITY_HERMITIAN_TOL: float = 1e-10
    DENSITY_TRACE_TOL: float = 1e-8
    DENSITY_EIG_TOL: float = 1e-8
    TRACE_DRIFT_TOL: float = 1e-6
    MOMENT_RESIDUE_TOL: float = 1e-8
    TAIL_LEVELS: int = 3
    TAIL_POPULATION_TOL: float = 1e-8
    ORACLE_MAX_MODES: int = 2
    ORACLE_MAX_CUTOFF: int = 40

    # cli-io
    ORACLE_MAX_SAMPLES: int = 1000
    ORACLE_AGREEMENT_TOL: float = 1e-3
    DEFAULT_CUTOFF: int = 20


settings = Settings()
tolerances = Tolerances()
