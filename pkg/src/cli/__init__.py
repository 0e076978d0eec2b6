"""Command-line surface."""
from .app import build_parser, execute, main, run

__all__ = ["build_parser", "execute", "main", "run"]
