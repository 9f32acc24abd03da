import logging

from src.util.logging import LogConfig, Logger


def test_extra_data_is_rendered_sorted(caplog):
    caplog.set_level(logging.INFO, logger="Trainer")
    Logger("Trainer").info("Epoch done", extra_data={"loss": 0.123456789, "epoch": 3})
    assert caplog.records[0].name == "Trainer"
    assert caplog.records[0].getMessage() == "Epoch done - epoch=3 loss=0.123457"


def test_plain_messages(caplog):
    caplog.set_level(logging.WARNING, logger="Stage")
    logger = Logger("Stage")
    logger.info("hidden")
    logger.warning("careful")
    logger.error("failed", extra_data={})
    assert [r.getMessage() for r in caplog.records] == ["careful", "failed"]
    assert [r.levelname for r in caplog.records] == ["WARNING", "ERROR"]


def test_debug_is_skipped_below_level(caplog):
    caplog.set_level(logging.INFO, logger="Volume")
    Logger("Volume").debug("noisy", extra_data={"done": 1})
    assert not caplog.records

    caplog.set_level(logging.DEBUG, logger="Volume")
    Logger("Volume").debug("noisy", extra_data={"done": 1})
    assert caplog.records[0].getMessage() == "noisy - done=1"


def test_log_config_levels():
    LogConfig.set_log_level("debug")
    assert LogConfig._log_level == logging.DEBUG
    LogConfig.set_log_level("unknown")
    assert LogConfig._log_level == logging.INFO

    LogConfig.set_verbose(True)
    assert LogConfig.is_verbose()
    assert LogConfig._log_level == logging.DEBUG
    LogConfig.set_verbose(False)
    assert not LogConfig.is_verbose()
    LogConfig.set_log_level("WARNING")
