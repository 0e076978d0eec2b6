"""Runtime settings, model-parameter files and shipped presets."""
from src.config.settings import Config, get_config

__all__ = ['Config', 'get_config']
