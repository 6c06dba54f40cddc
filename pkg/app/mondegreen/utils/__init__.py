"""Utilities module."""
from .atomic import atomic_write
from .logger import set_level, setup_logger

__all__ = ["atomic_write", "set_level", "setup_logger"]
