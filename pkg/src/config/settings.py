"""Runtime configuration for the simulator.

Only process-level settings live here (logging, output location, default
parallelism). Model parameters come from config files, see sim_config.
"""

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv


# Project root directory (parent of src/)
PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


class Config:
    """
    Configuration class for the simulator.
    Loads settings from environment variables and provides singleton access.
    """
    _instance: Optional['Config'] = None

    def __new__(cls):
        """Singleton pattern - only one instance of Config exists."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        """Initialize configuration from environment variables."""
        if self._initialized:
            return

        # Load .env file if it exists
        load_dotenv()

        # Logging configuration
        self.log_dir = self._resolve_path(os.getenv('LOG_DIR', 'logs'))
        self.log_level = os.getenv('LOG_LEVEL', 'INFO')

        # Default output directory for CSV and manifest files
        self.output_dir = self._resolve_path(os.getenv('SIM_OUTPUT_DIR', 'results'))

        # Worker threads for Monte Carlo trials (results do not depend on it)
        self.threads_raw = os.getenv('SIM_THREADS', '1')

        self._initialized = True

        # Validate configuration
        self._validate()

    def _resolve_path(self, path_str: str) -> Path:
        """
        Resolve a path string to an absolute Path.

        If the path is already absolute, returns it as-is.
        If relative, resolves it relative to PROJECT_ROOT.

        Args:
            path_str: Path string from environment variable

        Returns:
            Absolute Path object
        """
        path = Path(path_str)
        if path.is_absolute():
            return path
        return (PROJECT_ROOT / path).resolve()

    def _validate(self):
        """Validate settings and convert typed values."""
        try:
            self.threads = int(self.threads_raw)
        except ValueError:
            raise ValueError(
                f"SIM_THREADS must be an integer, got {self.threads_raw!r}"
            ) from None
        if self.threads < 1:
            raise ValueError(f"SIM_THREADS must be >= 1, got {self.threads}")

        if not isinstance(logging.getLevelName(self.log_level.upper()), int):
            raise ValueError(f"LOG_LEVEL is not a logging level: {self.log_level!r}")

    @property
    def log_level_value(self) -> int:
        """Numeric logging level."""
        return logging.getLevelName(self.log_level.upper())

    @classmethod
    def get_instance(cls) -> 'Config':
        """
        Get the singleton instance of Config.

        Returns:
            Config instance
        """
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    @classmethod
    def reset(cls) -> None:
        """Drop the cached instance so the environment is read again."""
        cls._instance = None


# Convenience function to get config instance
def get_config() -> Config:
    """
    Get the configuration instance.

    Returns:
        Config instance
    """
    return Config.get_instance()
