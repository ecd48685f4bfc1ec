"""Shared package initialization."""
from shared.config import Settings, settings

__all__ = ["Settings", "settings"]
