"""Ambient RF energy harvesting small-cell network simulator - Main package."""

__version__ = "1.0.0"
