import os
from dotenv import load_dotenv

from app.errors import ConfigurationError

# Find the .env file in the repository root
# os.path.dirname(__file__) is the current 'app' folder
dotenv_path = os.path.join(os.path.dirname(__file__), "..", ".env")
load_dotenv(dotenv_path)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from e


class Settings:
    # General
    PROJECT_NAME: str = "regdefect"
    REPORT_VERSION: str = "1.0"
    DEBUG: bool = os.getenv("REGDEFECT_DEBUG", "False").lower() == "true"
    LOG_LEVEL: str = "DEBUG" if DEBUG else os.getenv("REGDEFECT_LOG_LEVEL", "WARNING").upper()

    # Truncation
    TRUNC_DEGREE_ENV: str = "REGDEFECT_TRUNC_DEGREE"
    TRUNC_DEGREE: int = _int_env(TRUNC_DEGREE_ENV, 6)

    # Verification campaigns
    MAX_RETRIES: int = _int_env("REGDEFECT_MAX_RETRIES", 8)
    WORKERS: int = _int_env("REGDEFECT_WORKERS", 1)
    BASIS_SAMPLES: int = _int_env("REGDEFECT_BASIS_SAMPLES", 25)

    def __init__(self):
        if self.TRUNC_DEGREE < 2:
            raise ConfigurationError(
                f"{self.TRUNC_DEGREE_ENV} must be at least 2, got {self.TRUNC_DEGREE}"
            )
        if self.MAX_RETRIES < 1 or self.WORKERS < 1 or self.BASIS_SAMPLES < 1:
            raise ConfigurationError("retry, worker and sample counts must be positive")


settings = Settings()
