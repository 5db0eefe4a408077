"""Persistent settings for perturbcross.

Settings live in ~/.config/perturbcross/config.json. Missing keys fall back
to the defaults of ``Settings``; CLI flags override whatever is stored.
"""

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

from perturbcross.exceptions import ConfigError

CrossingMethod = Literal["sweep", "naive"]


@dataclass(frozen=True)
class Settings:
    """Tunable knobs shared by the library and the CLI.

    Attributes:
        oracle_budget: Largest allowed product of w! over all pipes
        oracle_workers: Process count for oracle batches (1 = serial)
        weight_charging: Use heavy-path charging when pipes split
        crossing_method: Pipe crossing enumeration, "sweep" or "naive"
        check_loop_exit: Cross-check the solver's loop exit with a path walk
    """

    oracle_budget: int = 1_000_000
    oracle_workers: int = 1
    weight_charging: bool = False
    crossing_method: CrossingMethod = "sweep"
    check_loop_exit: bool = True


_FIELD_TYPES: dict[str, type] = {
    "oracle_budget": int,
    "oracle_workers": int,
    "weight_charging": bool,
    "crossing_method": str,
    "check_loop_exit": bool,
}


def get_config_path() -> Path:
    """Get path to config file.

    Returns:
        Path to ~/.config/perturbcross/config.json
    """
    config_dir = Path.home() / ".config" / "perturbcross"
    config_dir.mkdir(parents=True, exist_ok=True)
    return config_dir / "config.json"


def _check_option(name: str, value: Any) -> None:
    if name not in _FIELD_TYPES:
        raise ConfigError(f"Unknown option '{name}'")
    expected = _FIELD_TYPES[name]
    # bool is an int subclass; keep the two apart
    if expected is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ConfigError(f"Option '{name}' must be an integer, got {value!r}")
    if not isinstance(value, expected):
        raise ConfigError(f"Option '{name}' must be {expected.__name__}, got {value!r}")
    if name == "crossing_method" and value not in ("sweep", "naive"):
        raise ConfigError(f"Option 'crossing_method' must be 'sweep' or 'naive', got {value!r}")
    if name in ("oracle_budget", "oracle_workers") and value < 1:
        raise ConfigError(f"Option '{name}' must be positive, got {value}")


def load_raw() -> dict[str, Any]:
    """Load the stored options without applying defaults.

    Returns:
        Dictionary of stored option values (empty when no file exists)

    Raises:
        ConfigError: If the file is corrupted
    """
    config_path = get_config_path()

    if not config_path.exists():
        return {}

    try:
        with open(config_path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file is corrupted: {e}") from e
    except OSError as e:
        raise ConfigError(f"Failed to load config: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError("Config file is corrupted (not a dict)")
    return data


def load_config() -> Settings:
    """Load settings from disk, filling in defaults.

    Returns:
        Settings instance

    Raises:
        ConfigError: If the file is corrupted or holds unknown options

    Example:
        >>> load_config().oracle_budget
        1000000
    """
    data = load_raw()
    for name, value in data.items():
        _check_option(name, value)
    return Settings(**data)


def save_config(settings: Settings) -> None:
    """Save settings to disk.

    Only values that differ from the defaults are written.

    Raises:
        ConfigError: If save fails
    """
    defaults = Settings()
    data = {
        field.name: getattr(settings, field.name)
        for field in dataclasses.fields(Settings)
        if getattr(settings, field.name) != getattr(defaults, field.name)
    }
    try:
        with open(get_config_path(), "w") as f:
            json.dump(data, f, indent=2, sort_keys=True)
    except OSError as e:
        raise ConfigError(f"Failed to save config: {e}") from e


def set_option(**values: Any) -> Settings:
    """Store one or more options.

    Args:
        **values: Option names mapped to new values

    Returns:
        The updated settings

    Raises:
        ConfigError: If an option is unknown or has the wrong type
        ValueError: If no options are given

    Example:
        >>> set_option(oracle_budget=5000, weight_charging=True)
        Settings(oracle_budget=5000, ...)
    """
    if not values:
        raise ValueError("No options provided")

    for name, value in values.items():
        _check_option(name, value)

    settings = dataclasses.replace(load_config(), **values)
    save_config(settings)
    return settings


def reset_option(*names: str) -> Settings:
    """Reset options to their defaults.

    Args:
        *names: Option names to reset; all options when empty

    Returns:
        The updated settings
    """
    data = load_raw()
    for name in names or tuple(data):
        if name not in _FIELD_TYPES:
            raise ConfigError(f"Unknown option '{name}'")
        data.pop(name, None)

    settings = Settings(**data)
    save_config(settings)
    return settings
