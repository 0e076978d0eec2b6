"""Exception hierarchy for the simulator."""
from __future__ import annotations

from typing import Optional


class SimulationError(Exception):
    """Base class for every error raised by the simulator."""


class ParameterError(SimulationError, ValueError):
    """A model parameter is missing, malformed or out of range."""

    def __init__(self, message: str, key: Optional[str] = None) -> None:
        super().__init__(message)
        self.key = key


class ConfigError(ParameterError):
    """A config file line could not be accepted."""

    def __init__(
        self, message: str, line: Optional[int] = None, key: Optional[str] = None
    ) -> None:
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}", key=key)
        self.line = line


class NoCandidateError(SimulationError, LookupError):
    """Nearest-point query over an empty point set."""


class SingularDistanceError(SimulationError, ArithmeticError):
    """Zero transmitter-receiver distance fed to the unclamped path-loss law."""
