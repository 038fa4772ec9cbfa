# persuade_net/config.py

import logging
import os
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """
    Process-wide settings, loaded from the environment and an optional .env file.

    Run-specific inputs (graph, benefit family, prior, ...) live in the JSON
    run config instead; these are the knobs that stay fixed across runs.
    """
    # --- Application Settings ---
    LOG_LEVEL: str = "INFO"
    THREADS: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)

    # --- Enumeration Caps ---
    MIS_CAP: int = 20
    EQUILIBRIA_CAP: int = 16

    # --- Root Finding ---
    ROOT_TOL: float = 1e-12
    BRACKET_CAP: float = 2.0 ** 60

    # --- Grids ---
    BELIEF_GRID: int = Field(default=2001, ge=11)
    SWEEP_GRID: int = Field(default=101, ge=11)
    VALIDATION_GRID: int = 512
    VALIDATION_TOL: float = 1e-9

    # --- Classification Tolerances ---
    CLASSIFY_TOL: float = 1e-9
    DEAD_BAND: float = 1e-7

    model_config = SettingsConfigDict(
        env_prefix="PERSUADE_NET_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


@lru_cache
def get_settings() -> Settings:
    """
    Returns the singleton Settings instance.

    Cached so the environment and .env file are read once per process; tests
    that tweak the environment call `get_settings.cache_clear()`.
    """
    logger.debug("Loading persuade-net settings from environment...")
    try:
        return Settings()
    except Exception as e:
        logger.critical(f"FATAL: Failed to load settings: {e}", exc_info=True)
        raise
