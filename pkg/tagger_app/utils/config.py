"""
Configuration management for the tagger.
Handles cost weights, resource locations and environment variables.
"""

from pathlib import Path
from typing import Optional

from dotenv import dotenv_values
from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from tagger_app.utils.errors import ResourceFormatError

MODES = ("unigram", "bigram", "full")

# Maximum n-gram order and whether constraints apply, per tagging mode
MODE_ORDERS = {
    "unigram": (1, False),
    "bigram": (2, False),
    "full": (3, True),
}


class WeightConfig(BaseSettings):
    """Costs of the non-lexical analyses and of constraint violations"""

    model_config = SettingsConfigDict(env_prefix="TAGGER_", extra="forbid", frozen=True)

    w_proper: float = 2.0
    w_acronym: float = 5.0
    w_unk: float = 100.0
    w_neg: float = 1000.0
    w_punct: float = 0.0

    @model_validator(mode="after")
    def check_ordering(self) -> "WeightConfig":
        if not (0 < self.w_proper <= self.w_acronym < self.w_unk < self.w_neg):
            raise ValueError(
                "weights must satisfy 0 < w_proper <= w_acronym < w_unk < w_neg, "
                f"got {self.w_proper}, {self.w_acronym}, {self.w_unk}, {self.w_neg}"
            )
        if self.w_punct < 0:
            raise ValueError("w_punct must be non-negative")
        return self


class AppSettings(BaseSettings):
    """Resource locations and runtime options"""

    model_config = SettingsConfigDict(env_prefix="TAGGER_", extra="ignore")

    tagset_path: Optional[Path] = None
    lexicon_path: Optional[Path] = None
    rules_path: Optional[Path] = None
    model_path: Optional[Path] = None
    compounds_path: Optional[Path] = None
    config_path: Optional[Path] = None
    mode: str = "full"
    workers: int = 1
    log_level: str = "INFO"
    allowed_origins: str = "http://localhost:8501,http://localhost:3000"


def load_weight_config(path: Optional[Path] = None) -> WeightConfig:
    """Build a WeightConfig from a key=value file, or from defaults and environment"""
    if path is None:
        return WeightConfig()

    values = dotenv_values(path)
    known = set(WeightConfig.model_fields)
    unknown = [key for key in values if key.lower() not in known]
    if unknown:
        raise ResourceFormatError(f"unknown configuration key {unknown[0]!r}", path=str(path))
    return WeightConfig(**{key.lower(): value for key, value in values.items()})


def load_config() -> AppSettings:
    """Load application configuration"""
    return AppSettings()


def mode_orders(mode: str) -> tuple:
    """(max n-gram order, constraints enabled) for a tagging mode"""
    if mode not in MODE_ORDERS:
        raise ValueError(f"unknown mode {mode!r}, expected one of {', '.join(MODES)}")
    return MODE_ORDERS[mode]
