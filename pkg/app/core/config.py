"""
Application configuration
"""
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """Engine settings"""
    APP_NAME: str = "Weyl Hurwitz Engine"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = os.getenv("DEBUG", "False").lower() in ("true", "1", "yes")

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None

    # Caps; exceeding any of them is an explicit failure
    SUBGROUP_CAP: int = 1_000_000
    ORBIT_NODE_CAP: int = 5_000_000
    ENUMERATION_CAP: int = 2_000_000

    # Conservation-law checks on explored braid edges
    EDGE_CHECK_RATE: float = 0.01
    EDGE_CHECK_SEED: int = 0

    # Parallelism degree for enumeration
    JOBS: int = 1

    # Elapsed time makes reports differ between runs, so it is opt-in
    REPORT_TIMINGS: bool = False

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


# Create settings instance
settings = Settings()


def resolve_cap(value: Optional[int], name: str) -> int:
    """
    Return an explicit cap or the configured default

    Args:
        value: Cap passed by the caller, or None
        name: Settings field holding the default

    Returns:
        int: The cap to use
    """
    cap = getattr(settings, name) if value is None else value
    if cap < 1:
        raise ValueError(f"{name} must be positive, got {cap}")
    return cap
