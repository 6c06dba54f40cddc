"""Configuration module."""
from .settings import DATA_DIR, Settings, settings

__all__ = ["DATA_DIR", "Settings", "settings"]
