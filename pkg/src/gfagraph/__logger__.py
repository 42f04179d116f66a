import logging
import os
from pathlib import Path

LOG_FILE_ENV = "GFAGRAPH_LOG_FILE"
LOG_LEVEL_ENV = "GFAGRAPH_LOG_LEVEL"
DEFAULT_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"

# shared handler of every package logger
_handler: logging.Handler | None = None
_loggers: list[logging.Logger] = []


def gfagraph_filter(record: logging.LogRecord) -> bool:
    """Keep records of gfagraph loggers only, matplotlib logs through the same root."""

    return record.name.startswith("gfagraph")


def _levelFromEnv(default: int) -> int:
    name = os.environ.get(LOG_LEVEL_ENV)
    if not name:
        return default
    level = logging.getLevelName(name.upper())
    return level if isinstance(level, int) else default


def _makeHandler(
    log_file: str | os.PathLike | None, level: int, fmt: str
) -> logging.Handler:
    if log_file is None:
        return logging.NullHandler()
    handler = logging.FileHandler(Path(log_file), mode="a", encoding="utf-8", delay=True)
    handler.setFormatter(logging.Formatter(fmt))
    handler.addFilter(gfagraph_filter)
    handler.setLevel(level)
    return handler


def setLogFile(
    log_file: str | os.PathLike | None,
    level: int = logging.DEBUG,
    fmt: str = DEFAULT_FORMAT,
) -> None:
    """
    Route the records of all gfagraph loggers to ``log_file``; ``None`` restores the
    default given by ``GFAGRAPH_LOG_FILE``.

    The file is opened in append mode when the first record is emitted.
    """
    global _handler

    previous = _handler
    if log_file is None:
        log_file = os.environ.get(LOG_FILE_ENV)
    _handler = _makeHandler(log_file, _levelFromEnv(level), fmt)
    for logger in _loggers:
        if previous is not None:
            logger.removeHandler(previous)
        logger.addHandler(_handler)
    if previous is not None:
        previous.close()


def get_logger(
    name: str | None = None,
    level: int = logging.DEBUG,
    fmt: str = DEFAULT_FORMAT,
) -> logging.Logger:
    """
    Return a package logger sharing one handler with all other gfagraph loggers.

    Records are discarded unless ``GFAGRAPH_LOG_FILE`` names a log file or
    ```setLogFile``` was called; ``GFAGRAPH_LOG_LEVEL`` overrides the level.

    Usage (in any module):
        logger = get_logger(__name__)
        logger.info("Something happened.")
    """
    global _handler

    if _handler is None:
        _handler = _makeHandler(os.environ.get(LOG_FILE_ENV), _levelFromEnv(level), fmt)

    logger = logging.getLogger(name)
    if _handler not in logger.handlers:
        logger.addHandler(_handler)
    if logger not in _loggers:
        _loggers.append(logger)

    logger.setLevel(_levelFromEnv(level))
    logger.propagate = False

    return logger
