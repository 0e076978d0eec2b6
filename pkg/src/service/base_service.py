"""Base service with common initialization logic for all services.

Provides logger injection and lazy access to the runtime configuration.
"""
from __future__ import annotations

from abc import ABC
from logging import Logger

from src.config import get_config


class BaseService(ABC):
    """Base class for all services with common initialization logic.

    Provides:
    - Logger initialization
    - Config lazy loading property
    """

    def __init__(self, logger: Logger):
        """Initialize base service.

        Args:
            logger: Logger instance for this service
        """
        self.logger = logger
        self._config = None

    @property
    def config(self):
        """Lazy-load config if not provided during initialization.

        Returns:
            Application configuration instance from get_config()
        """
        if self._config is None:
            self._config = get_config()
        return self._config
