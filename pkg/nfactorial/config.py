"""Configuration management for nfactorial"""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Run settings, read from NFACT_* environment variables and .env"""

    # Parallelism
    workers: int = Field(1, ge=1)

    # Result cache
    cache_dir: Path = Field(default_factory=lambda: Path.home() / ".nfactorial")
    use_cache: bool = True

    # Scale
    deep: bool = False
    max_n: int = Field(5, ge=1)

    # Seed of the modular prime generator
    prime_seed: int = 20011

    model_config = SettingsConfigDict(
        env_prefix="NFACT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    @property
    def effective_max_n(self) -> int:
        return max(self.max_n, 6) if self.deep else self.max_n


def get_settings(**overrides: Optional[object]) -> Settings:
    """Get settings; explicit (non-None) overrides win over the environment"""
    return Settings(**{k: v for k, v in overrides.items() if v is not None})
