"""Command-line scenarios: ``python -m qkmetric <command>``."""

from .config import ScenarioConfig, parse_cubic
from .main import build_parser, main, run

__all__ = ["ScenarioConfig", "parse_cubic", "build_parser", "main", "run"]
