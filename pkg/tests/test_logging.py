"""
Unit Tests for structured logging
"""
import json
import logging

import pytest
from typer.testing import CliRunner

from client.cli import app
from engine.monitoring.logging import CustomJsonFormatter, RunContextFilter, setup_logging

pytestmark = pytest.mark.unit


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    root.handlers = handlers
    root.setLevel(level)


def _record(message: str = "c* found") -> logging.LogRecord:
    return logging.LogRecord("engine.wavespeed.shooting", logging.INFO, __file__, 1, message, None, None)


def test_run_id_in_json_records():
    """Test that the run filter stamps records and the formatter emits the field"""
    record = _record()
    assert RunContextFilter("abc123").filter(record)
    payload = json.loads(CustomJsonFormatter("%(timestamp)s %(level)s %(logger)s %(message)s").format(record))
    assert payload["run_id"] == "abc123"
    assert payload["service"] == "wavefront-speed"
    assert payload["logger"] == "engine.wavespeed.shooting"


def test_records_without_run_id():
    """Test that the field is omitted when no run is bound"""
    payload = json.loads(CustomJsonFormatter("%(message)s").format(_record()))
    assert "run_id" not in payload


def test_setup_logging_binds_run_id(restore_root_logger):
    """Test that the console handler carries the run filter"""
    setup_logging("DEBUG", json_logs=True, run_id="run-1")
    (handler,) = restore_root_logger.handlers
    assert isinstance(handler.formatter, CustomJsonFormatter)
    assert [f.run_id for f in handler.filters if isinstance(f, RunContextFilter)] == ["run-1"]

    setup_logging("INFO", json_logs=False)
    (handler,) = restore_root_logger.handlers
    assert handler.filters == []


def test_each_invocation_gets_a_run_id(mocker, tmp_path):
    """Test that every CLI invocation binds a fresh run identifier"""
    setup = mocker.patch("client.cli.setup_logging")
    runner = CliRunner()
    runner.invoke(app, ["check", str(tmp_path / "absent.toml")])
    runner.invoke(app, ["check", str(tmp_path / "absent.toml")])
    run_ids = [call.kwargs["run_id"] for call in setup.call_args_list]
    assert len(run_ids) == 2
    assert all(len(run_id) == 12 for run_id in run_ids)
    assert run_ids[0] != run_ids[1]
