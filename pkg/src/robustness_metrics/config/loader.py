"""TOML configuration file loading.

A config file may hold the sections ``[analysis]``, ``[divergence]``,
``[simulation]`` and ``[report]``. Values from a file are passed to the
settings classes as init arguments, so they override environment variables;
explicit CLI flags are merged on top of them.

Example:
    sections = load_config_file("robustness.toml")
    analysis = build_config(AnalysisConfig, sections, {"epsilon": 1e-6})
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Optional, TypeVar, Union

from pydantic import ValidationError
from pydantic_settings import BaseSettings

from robustness_metrics.core.errors import ConfigFileError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

KNOWN_SECTIONS = ("analysis", "divergence", "simulation", "report")

SettingsT = TypeVar("SettingsT", bound=BaseSettings)


def load_config_file(path: Optional[Union[str, Path]]) -> dict[str, dict[str, Any]]:  # noqa: UP045
    """Read the known sections of a TOML config file.

    Args:
        path: Config file, or None for no file

    Returns:
        Section name -> key/value table (empty when path is None)

    Raises:
        ConfigFileError: File missing, unreadable or not valid TOML
    """
    if path is None:
        return {}
    file_path = Path(path)
    try:
        with file_path.open("rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigFileError(f"Config file not found: {file_path}") from e
    except OSError as e:
        raise ConfigFileError(f"Failed to read config file {file_path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigFileError(f"Invalid TOML in {file_path}: {e}") from e

    sections: dict[str, dict[str, Any]] = {}
    for name, table in data.items():
        if name not in KNOWN_SECTIONS:
            logger.warning(f"Ignoring unknown config section [{name}] in {file_path}")
            continue
        if not isinstance(table, dict):
            raise ConfigFileError(f"[{name}] in {file_path} must be a table")
        sections[name] = table
    logger.debug(f"Loaded config sections {sorted(sections)} from {file_path}")
    return sections


def build_config(
    config_class: type[SettingsT],
    sections: Mapping[str, Mapping[str, Any]],
    section: str,
    overrides: Optional[Mapping[str, Any]] = None,  # noqa: UP045
) -> SettingsT:
    """Instantiate a settings class with file values and CLI overrides.

    Overrides whose value is None are treated as not given.

    Raises:
        ConfigFileError: The merged values fail validation
    """
    values = dict(sections.get(section, {}))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return config_class(**values)
    except ValidationError as e:
        raise ConfigFileError(f"Invalid [{section}] configuration: {e}") from e
