"""
Process Settings loaded from the environment (and an optional .env file)
"""

from typing import Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Runtime knobs that do not belong in an experiment file"""

    workers: int = Field(default=1, ge=1, description="Parallel sweep workers")
    log_level: str = Field(default="INFO")
    log_file: Optional[str] = Field(
        default=None, description="Optional log file, stderr only when unset"
    )

    model_config = SettingsConfigDict(env_prefix="ICVI_", extra="ignore")


def get_settings() -> Settings:
    """Read settings fresh so tests can monkeypatch the environment"""
    return Settings()
