"""Configuration loading and validation for the heat-kernel lab."""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .exceptions import ConfigException

logger = logging.getLogger(__name__)

CONFIG_ROOT = Path(__file__).resolve().parents[2] / "config"
DEFAULT_CONFIG = CONFIG_ROOT / "default.yml"
SCENARIO_DIR = CONFIG_ROOT / "scenarios"
OUTPUT_DIR_ENV = "LEVYLAB_OUTPUT_DIR"
LOG_LEVEL_ENV = "LEVYLAB_LOG_LEVEL"

DEFAULTS: Dict[str, Any] = {
    "general": {"output_dir": "out", "log_level": "INFO", "jobs": 1},
    "overrides": {"tolerance_scale": 1.0, "grid_n": None, "grid_l": None},
}


def _read_yaml(config_path: Path) -> Dict[str, Any]:
    if not config_path.exists():
        raise ConfigException(f"Configuration file not found: {config_path}")
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigException(f"Invalid YAML in {config_path}: {e}")
    if not isinstance(config, dict):
        raise ConfigException(f"Configuration {config_path} must be a mapping")
    return config


def load_environment() -> Dict[str, Optional[str]]:
    """Load `.env` and return the environment defaults the lab understands."""
    load_dotenv()
    return {
        "output_dir": os.getenv(OUTPUT_DIR_ENV),
        "log_level": os.getenv(LOG_LEVEL_ENV),
    }


def load_config(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """Load and validate the general configuration.

    Values come from the built-in defaults, then the file, then the
    environment; CLI flags are applied later with apply_overrides().

    Args:
        config_path: Path to configuration file (config/default.yml if it exists)

    Returns:
        Dictionary containing configuration settings

    Raises:
        ConfigException: If configuration is invalid
    """
    config = {section: dict(values) for section, values in DEFAULTS.items()}
    path = config_path if config_path is not None else DEFAULT_CONFIG
    if config_path is not None or path.exists():
        logger.info(f"Loading configuration from {path}")
        loaded = _read_yaml(path)
        _validate_config(loaded)
        for section, values in loaded.items():
            if isinstance(values, dict):
                config.setdefault(section, {}).update(values)
            else:
                config[section] = values
    for key, value in load_environment().items():
        if value:
            config["general"][key] = value
    return config


def _validate_config(config: Dict[str, Any]):
    """Validate the general configuration dictionary.

    Raises:
        ConfigException: If configuration is invalid
    """
    if "general" not in config:
        raise ConfigException("Missing required configuration section: general")
    jobs = config["general"].get("jobs", 1)
    if not isinstance(jobs, int) or jobs < 1:
        raise ConfigException(f"general.jobs must be a positive integer, got {jobs}")
    scale = config.get("overrides", {}).get("tolerance_scale", 1.0)
    if scale is not None and float(scale) <= 0:
        raise ConfigException("overrides.tolerance_scale must be positive")

    logger.info("Configuration validation successful")


def load_scenario_config(config_path: Path) -> Dict[str, Any]:
    """Load and validate one scenario file.

    Raises:
        ConfigException: If the scenario or model section is missing or a check is malformed
    """
    logger.debug(f"Loading scenario from {config_path}")
    config = _read_yaml(Path(config_path))
    _validate_scenario(config, Path(config_path))
    return config


def _validate_scenario(config: Dict[str, Any], path: Path):
    for section in ("scenario", "model"):
        if section not in config:
            raise ConfigException(f"Missing required configuration section: {section} in {path}")
    scenario = config["scenario"]
    if "name" not in scenario:
        raise ConfigException(f"Scenario in {path} has no name")
    checks = scenario.get("checks")
    if not checks:
        raise ConfigException(f"Scenario {scenario['name']} lists no checks")
    for check in checks:
        for key in ("name", "type", "provenance"):
            if key not in check:
                raise ConfigException(f"Check in scenario {scenario['name']} has no {key}")
        tolerance = check.get("tolerance")
        if tolerance is not None and float(tolerance) <= 0:
            raise ConfigException(f"Check {check['name']}: tolerance must be positive")
        if check.get("expect", "pass") not in ("pass", "fail"):
            raise ConfigException(f"Check {check['name']}: expect must be 'pass' or 'fail'")


def apply_overrides(config: Dict[str, Any], **overrides: Any) -> Dict[str, Any]:
    """Apply CLI flags (None values are ignored) on top of a loaded configuration."""
    general_keys = ("output_dir", "log_level", "jobs")
    for key, value in overrides.items():
        if value is None:
            continue
        section = "general" if key in general_keys else "overrides"
        config.setdefault(section, {})[key] = value
    scale = config["overrides"].get("tolerance_scale")
    if scale is not None and float(scale) <= 0:
        raise ConfigException("--tolerance-scale must be positive")
    return config
