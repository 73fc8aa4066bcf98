import dataclasses
import functools
import os
from pathlib import Path

from dotenv import load_dotenv

from pasm.types.errors import ConfigurationError

DEFAULT_ENUMERATION_CAP = 10**6
DEFAULT_MC_SAMPLES = 1024
DEFAULT_ORACLE_MAX_ITEMS = 8
DEFAULT_ORACLE_MAX_STATES = 4
DEFAULT_TOLERANCE = 1e-9
DEFAULT_WORKERS = 4


@dataclasses.dataclass(frozen=True)
class Settings:
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    mc_samples: int = DEFAULT_MC_SAMPLES
    oracle_max_items: int = DEFAULT_ORACLE_MAX_ITEMS
    oracle_max_states: int = DEFAULT_ORACLE_MAX_STATES
    tolerance: float = DEFAULT_TOLERANCE
    workers: int = DEFAULT_WORKERS


def _read(name: str, cast, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = cast(raw)
    except ValueError as e:
        raise ConfigurationError(f"{name}={raw!r} is not a valid {cast.__name__}") from e
    if value <= 0:
        raise ConfigurationError(f"{name} must be positive, got {raw!r}")
    return value


@functools.lru_cache(maxsize=1)
def load_settings() -> Settings:
    """Read settings from the environment, loading a `.env` file from the working directory if present."""
    dotenv_path = Path.cwd() / ".env"
    if dotenv_path.exists():
        load_dotenv(dotenv_path=dotenv_path)

    return Settings(
        enumeration_cap=_read("PASM_ENUMERATION_CAP", int, DEFAULT_ENUMERATION_CAP),
        mc_samples=_read("PASM_MC_SAMPLES", int, DEFAULT_MC_SAMPLES),
        oracle_max_items=_read("PASM_ORACLE_MAX_ITEMS", int, DEFAULT_ORACLE_MAX_ITEMS),
        oracle_max_states=_read("PASM_ORACLE_MAX_STATES", int, DEFAULT_ORACLE_MAX_STATES),
        tolerance=_read("PASM_TOLERANCE", float, DEFAULT_TOLERANCE),
        workers=_read("PASM_WORKERS", int, DEFAULT_WORKERS),
    )
