from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, TypeVar

from dotenv import load_dotenv

from domain.errors import ConfigurationError, QAccordError
from domain.models import OptimizerConfig


T = TypeVar("T")


@dataclass(frozen=True)
class Settings:
    """
    Runtime configuration read from the environment (and a `.env` file).

    Command-line flags take precedence over these values.
    """

    out_dir: str = "results"
    workers: int = 1
    coarse_resolution: int = 400
    max_refine_iterations: int = 60
    log_level: str = "WARNING"

    def optimizer_config(self, coarse_resolution: Optional[int] = None) -> OptimizerConfig:
        return OptimizerConfig(
            coarse_resolution=self.coarse_resolution if coarse_resolution is None else coarse_resolution,
            max_refine_iterations=self.max_refine_iterations,
        )


def _read(env: Mapping[str, str], name: str, parse: Callable[[str], T], default: T) -> T:
    raw = env.get(name)
    if raw is None or raw == "":
        return default
    try:
        return parse(raw)
    except ValueError:
        raise ConfigurationError(f"{name}={raw!r} is not a valid value") from None


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise ValueError(raw)
    return value


def _log_level(raw: str) -> str:
    level = raw.upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        raise ValueError(raw)
    return level


def load_settings(env: Optional[Mapping[str, str]] = None) -> Settings:
    """
    Build `Settings` from `env`, defaulting to `os.environ` after loading `.env`.
    """

    if env is None:
        load_dotenv()
        env = os.environ

    settings = Settings(
        out_dir=_read(env, "QACCORD_OUT_DIR", str, Settings.out_dir),
        workers=_read(env, "QACCORD_WORKERS", _positive_int, Settings.workers),
        coarse_resolution=_read(env, "QACCORD_COARSE_RESOLUTION", _positive_int, Settings.coarse_resolution),
        max_refine_iterations=_read(
            env, "QACCORD_MAX_REFINE_ITERATIONS", _positive_int, Settings.max_refine_iterations
        ),
        log_level=_read(env, "QACCORD_LOG_LEVEL", _log_level, Settings.log_level),
    )
    try:
        settings.optimizer_config()
    except QAccordError as exc:
        raise ConfigurationError(f"invalid optimizer settings: {exc}") from exc
    return settings
