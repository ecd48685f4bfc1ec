"""
Structured Logging Configuration
"""
import logging
import sys
from datetime import datetime, UTC
from typing import Any

from pythonjsonlogger import jsonlogger


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """Custom JSON formatter for structured logging"""
    
    def add_fields(self, log_record: dict[str, Any], record: logging.LogRecord, message_dict: dict[str, Any]) -> None:
        super().add_fields(log_record, record, message_dict)
        
        log_record['timestamp'] = datetime.now(UTC).isoformat()
        log_record['level'] = record.levelname
        log_record['logger'] = record.name
        log_record['service'] = 'wavefront-speed'
        
        # Set by RunContextFilter
        if hasattr(record, 'run_id'):
            log_record['run_id'] = record.run_id


class RunContextFilter(logging.Filter):
    """Stamp every record with the identifier of the current CLI invocation"""

    def __init__(self, run_id: str):
        super().__init__()
        self.run_id = run_id

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = self.run_id
        return True


def setup_logging(level: str = "INFO", json_logs: bool = True, run_id: str | None = None) -> None:
    """
    Configure structured logging

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        json_logs: Whether to use JSON formatting
        run_id: Identifier attached to every record, if given
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level.upper()))
    root_logger.handlers = []

    # Logs go to stderr so JSON reports on stdout stay clean
    console_handler = logging.StreamHandler(sys.stderr)
    if run_id:
        console_handler.addFilter(RunContextFilter(run_id))

    if json_logs:
        formatter = CustomJsonFormatter(
            '%(timestamp)s %(level)s %(logger)s %(message)s'
        )
    else:
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
    
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)


# Shooting logger for the audit trail of every shot
shooting_logger = logging.getLogger('shooting_audit')


def log_shot(c: float, outcome: str, terminal_ratio: float | None, elapsed_ms: float) -> None:
    """
    Log one shot of the reduced equation
    """
    shooting_logger.debug(
        "Shot integrated",
        extra={
            'speed': c,
            'outcome': outcome,
            'terminal_ratio': terminal_ratio,
            'elapsed_ms': round(elapsed_ms, 3),
        }
    )


# Error logger
error_logger = logging.getLogger('errors')


def log_error(error: Exception, context: dict[str, Any] | None = None) -> None:
    """
    Log errors with context
    """
    error_logger.error(
        f"Error occurred: {error}",
        extra={
            'error_type': type(error).__name__,
            'error_message': str(error),
            'context': context or {}
        },
    )
