"""Runtime configuration for netrelay."""

from __future__ import annotations

import os
from pathlib import Path
from threading import RLock
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_LOG_ERROR_ENABLED = True
DEFAULT_LOG_WARNING_ENABLED = True
DEFAULT_LOG_INFO_ENABLED = True
DEFAULT_LOG_DEBUG_ENABLED = False
DEFAULT_THREADS = 0
DEFAULT_MAX_ITERS = 20
DEFAULT_MIN_BIT_ERRORS = 100
DEFAULT_MAX_FRAMES = 100_000
DEFAULT_BATCH_FRAMES = 64
DEFAULT_PROBABILITY_FLOOR = 1e-9


class AppSettings(BaseSettings):
    """Settings loaded from ``NETRELAY_*`` environment variables or a ``.env`` file."""

    model_config = SettingsConfigDict(
        env_prefix="NETRELAY_",
        env_file=".env",
        extra="ignore",
    )

    log_error_enabled: bool = Field(
        default=DEFAULT_LOG_ERROR_ENABLED,
        description="Emit error-level log records.",
    )
    log_warning_enabled: bool = Field(
        default=DEFAULT_LOG_WARNING_ENABLED,
        description="Emit warning-level log records.",
    )
    log_info_enabled: bool = Field(
        default=DEFAULT_LOG_INFO_ENABLED,
        description="Emit information-level log records.",
    )
    log_debug_enabled: bool = Field(
        default=DEFAULT_LOG_DEBUG_ENABLED,
        description="Emit debug-level log records.",
    )
    log_file: Optional[Path] = Field(
        default=None,
        description="Also append log records to this file; useful for multi-hour sweeps.",
    )
    threads: int = Field(
        default=DEFAULT_THREADS,
        ge=0,
        description="Worker threads used for frame decoding. 0 selects os.cpu_count().",
    )
    max_iters: int = Field(
        default=DEFAULT_MAX_ITERS,
        ge=1,
        description="Default sum-product iteration budget per constituent decode.",
    )
    min_bit_errors: int = Field(
        default=DEFAULT_MIN_BIT_ERRORS,
        ge=1,
        description="Bit errors on the worse stream after which a sweep point stops.",
    )
    max_frames: int = Field(
        default=DEFAULT_MAX_FRAMES,
        ge=1,
        description="Hard cap on frames simulated per sweep point.",
    )
    batch_frames: int = Field(
        default=DEFAULT_BATCH_FRAMES,
        ge=1,
        description="Frames handed to a worker as one unit of work.",
    )
    probability_floor: float = Field(
        default=DEFAULT_PROBABILITY_FLOOR,
        gt=0.0,
        lt=0.5,
        description="Lower clamp on crossover probabilities used for LLR initialisation.",
    )

    @field_validator("threads", mode="before")
    @classmethod
    def _parse_threads(cls, value: object) -> object:
        """Treat an empty string as 'auto'."""

        if isinstance(value, str) and not value.strip():
            return DEFAULT_THREADS
        return value

    def worker_count(self) -> int:
        """Resolve ``threads`` into a concrete pool size."""

        if self.threads > 0:
            return self.threads
        return max(1, os.cpu_count() or 1)


_SETTINGS_LOCK = RLock()
_SETTINGS: AppSettings | None = None


def get_settings() -> AppSettings:
    """Return the current settings, loading them on first use."""

    global _SETTINGS
    with _SETTINGS_LOCK:
        if _SETTINGS is None:
            _SETTINGS = AppSettings()
        return _SETTINGS


def reload_settings() -> AppSettings:
    """Reload settings from the environment, replacing the cached instance."""

    global _SETTINGS
    with _SETTINGS_LOCK:
        _SETTINGS = AppSettings()
        return _SETTINGS
