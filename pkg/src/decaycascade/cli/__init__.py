"""Command-line interface and workspace handling."""

from .config import RunConfig, build_config, read_config_file
from .main import build_parser, main
from .workspace import Workspace

__all__ = ["RunConfig", "Workspace", "build_config", "build_parser", "main", "read_config_file"]
