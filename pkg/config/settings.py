# ============================================================
#  IBGAS — Settings / Environment Loader (Pydantic v2)
# ============================================================

from __future__ import annotations

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="IBGAS_",
        extra="ignore",
    )

    APP_VERSION: str = "1.0.0"

    # logging only; nothing here changes numerical results
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Optional[str] = None

    DEFAULT_SEED: int = 0
    CURVE_WORKERS: int = Field(1, ge=1)

    DATA_DIR: str = "data"

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def parse_log_level(cls, value):
        if value is None:
            return "INFO"

        raw = str(value).strip().upper()
        if raw not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            return "INFO"
        return raw

    @field_validator("LOG_DIR", mode="before")
    @classmethod
    def parse_log_dir(cls, value):
        if value is None:
            return None
        raw = str(value).strip()
        return raw or None


settings = Settings()
