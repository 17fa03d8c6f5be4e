"""
Configuration loading for wickflow.

Numerical defaults are read once from ``config/wickflow.yaml``. Environment
variables ``WICKFLOW_JOBS`` and ``WICKFLOW_LOG_LEVEL`` override the matching
entries.
"""

import os

import yaml

from .errors import ConfigError

config_path = os.path.join(os.path.dirname(__file__), "..", "config", "wickflow.yaml")
with open(config_path, "r") as f:
    wickflow_config = yaml.safe_load(f)

ENV_OVERRIDES = {
    ("cli", "jobs"): ("WICKFLOW_JOBS", int),
    ("logging", "level"): ("WICKFLOW_LOG_LEVEL", str),
}


def get(section, key):
    """
    Look up a configuration value.

    Args:
        section: Top-level section of wickflow.yaml (e.g. "flow")
        key: Key inside the section

    Returns:
        The configured value, after environment overrides

    Raises:
        ConfigError: If the section or key does not exist
    """
    override = ENV_OVERRIDES.get((section, key))
    if override is not None:
        env_name, cast = override
        raw = os.environ.get(env_name)
        if raw:
            try:
                return cast(raw)
            except ValueError as e:
                raise ConfigError(f"Invalid value for {env_name}: {raw!r}", e) from e

    values = wickflow_config.get(section)
    if values is None or key not in values:
        raise ConfigError(f"Missing configuration entry: {section}.{key}")
    return values[key]


def section(name):
    """Return a copy of a whole configuration section."""
    values = wickflow_config.get(name)
    if values is None:
        raise ConfigError(f"Missing configuration section: {name}")
    return dict(values)
