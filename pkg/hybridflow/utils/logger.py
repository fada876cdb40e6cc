"""Logging configuration"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Log files are only written when a directory is configured
_log_dir: Optional[Path] = (
    Path(os.environ["HYBRIDFLOW_LOG_DIR"]) if os.environ.get("HYBRIDFLOW_LOG_DIR") else None
)


def _hybridflow_loggers():
    for name, logger in logging.Logger.manager.loggerDict.items():
        if isinstance(logger, logging.Logger) and name.startswith(("hybridflow", "__main__")):
            yield name, logger


def _file_handler(directory: Path, name: str, level: int) -> logging.FileHandler:
    directory.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(directory / f"{name}.log")
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    return handler


def set_log_dir(path: Optional[str]) -> None:
    """Configure the directory for log files (None disables file logging)

    Loggers created before the call get a file handler too.
    """
    global _log_dir
    _log_dir = Path(path) if path else None
    if _log_dir is None:
        return
    for name, logger in _hybridflow_loggers():
        if not any(isinstance(h, logging.FileHandler) for h in logger.handlers):
            logger.addHandler(_file_handler(_log_dir, name, logger.level))


def set_level(level: int) -> None:
    """Change the level of every hybridflow logger created so far"""
    for _, logger in _hybridflow_loggers():
        logger.setLevel(level)
        for handler in logger.handlers:
            handler.setLevel(level)


def get_logger(name: str, level=logging.INFO) -> logging.Logger:
    """Create and configure logger instance"""
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if logger.handlers:
        return logger

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    # Console handler; stdout is left to the artifacts of scripted runs
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if _log_dir is not None:
        logger.addHandler(_file_handler(_log_dir, name, level))

    logger.propagate = False
    return logger
