from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    """Process settings loaded from environment variables."""
    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: str = ""  # empty disables the file handler

    # Output
    OUTPUT_DIRECTORY: str = "output"
    CSV_SIGNIFICANT_DIGITS: int = 9

    # Simulation defaults (overridden by presets, config files and flags)
    DEFAULT_SEED: int = 20100614
    DEFAULT_REALIZATIONS: int = 10
    DEFAULT_SUBSTEPS: int = 4

    # Sweep parallelism: 1 runs points serially, >1 uses a process pool
    SWEEP_WORKERS: int = 1

    class Config:
        env_file = ".env"
        case_sensitive = True


@lru_cache()
def get_settings() -> Settings:
    """Get cached process settings."""
    return Settings()
