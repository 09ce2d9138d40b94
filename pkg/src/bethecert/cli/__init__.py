"""Command-line driver: config parsing, check orchestration, JSON reports."""

from .config import CHECK_TYPES, CheckSpec, ConfigError, FactorSpec, RunConfig, SubalgebraSpec, parse_config, parse_config_text
from .main import main
from .runner import SCHEMA_VERSION, DimensionCapError, build_image, build_module, execute, exit_code, parse_grid, sweep

__all__ = [
    "CHECK_TYPES",
    "CheckSpec",
    "ConfigError",
    "FactorSpec",
    "RunConfig",
    "SubalgebraSpec",
    "parse_config",
    "parse_config_text",
    "main",
    "SCHEMA_VERSION",
    "DimensionCapError",
    "build_image",
    "build_module",
    "execute",
    "exit_code",
    "parse_grid",
    "sweep",
]
