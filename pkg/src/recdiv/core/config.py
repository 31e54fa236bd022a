from __future__ import annotations
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # UPPERCASE names; environment variables carry the RECDIV_ prefix
    SEED: int = 0
    WORKERS: int | None = None  # None -> os.cpu_count()
    LOG_LEVEL: str = "INFO"
    DEBUG: bool = False

    SIEVE_LIMIT: int = 10**8
    PERIOD_STATE_CAP: int = 10**8
    RETENTION_CAP: int = 10**6
    ZERO_BOUND: int = 10**4
    TRIAL_LIMIT: int = 10**6
    RHO_MAX_STEPS: int = 10**6
    MATRIX_CROSSOVER: int = 64  # matrix power once n > MATRIX_CROSSOVER * k

    model_config = SettingsConfigDict(
        env_prefix="RECDIV_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    def seed_from_env(self) -> bool:
        """True when SEED came from the environment or .env rather than the default."""
        return "SEED" in self.model_fields_set


settings = Settings()
