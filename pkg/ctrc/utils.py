import os
import sys
from dataclasses import dataclass, fields, replace

import yaml
from loguru import logger

DEFAULT_CONFIG_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config", "defaults.yaml"
)


@dataclass(frozen=True)
class Settings:
    budget_states: int = 20000
    budget_depth: int = 12
    grid: int = 4
    max_valuations: int = 50000
    recursion_limit: int = 20000


def load_config(config_path: str = DEFAULT_CONFIG_PATH) -> Settings:
    """
    Read workbench defaults from a yaml file.

    Args:
        config_path (str): yaml file with any of the Settings keys.

    Returns:
        Settings: defaults, overridden by the values found in the file.
    """
    settings = Settings()
    if not os.path.exists(config_path):
        logger.debug(f"No config at {config_path}; using built-in defaults")
        return settings

    with open(config_path, "r") as stream:
        loaded = yaml.safe_load(stream) or {}

    known = {f.name for f in fields(Settings)}
    unknown = set(loaded) - known
    if unknown:
        raise ValueError(f"Unknown configuration keys in {config_path}: {sorted(unknown)}")
    for key, value in loaded.items():
        if not isinstance(value, int) or value <= 0:
            raise ValueError(f"Configuration value {key} must be a positive integer, got {value!r}")

    logger.debug(f"Loaded configuration from {config_path}: {loaded}")
    return replace(settings, **loaded)


def configure_logging(verbosity: int = 0):
    logger.remove()
    match verbosity:
        case 0:
            level = "WARNING"
        case 1:
            level = "INFO"
        case _:
            level = "DEBUG"
    logger.add(sys.stderr, level=level, format="<level>{level: <8}</level> {message}")


def raise_recursion_limit(limit: int):
    # Condition evaluation recurses once per nested condition and per reduction step.
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
