"""Logging helpers."""
from engine.monitoring.logging import log_error, log_shot, setup_logging

__all__ = ["log_error", "log_shot", "setup_logging"]
