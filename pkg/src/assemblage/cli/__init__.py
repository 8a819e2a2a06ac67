"""Command-line interface."""

from .config import RunConfig
from .main import main

__all__ = ["RunConfig", "main"]
