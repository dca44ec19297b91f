"""
Logging module for dissimilarity-tree K-means.
Console output goes to stderr so stdout stays free for CLI artifacts;
a DEBUG-level file log is optional.
"""

import logging
import sys

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_configured: bool = False
_handlers: list[logging.Handler] = []


def setup_logging(
    level: str = "WARNING",
    log_to_file: bool = False,
    log_file_name: str = "dtree_kmeans.log"
) -> None:
    """Attach the stderr handler (and the file handler) to the root logger once per process."""
    global _configured
    if _configured:
        return

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(getattr(logging, level.upper(), logging.WARNING))
    _handlers.append(console)

    if log_to_file:
        log_file = logging.FileHandler(log_file_name, mode="a", encoding="utf-8")
        log_file.setLevel(logging.DEBUG)
        _handlers.append(log_file)

    for handler in _handlers:
        handler.setFormatter(formatter)
        root_logger.addHandler(handler)
    _configured = True


def reset_logging() -> None:
    """Detach and close the handlers installed by setup_logging."""
    global _configured
    root_logger = logging.getLogger()
    while _handlers:
        handler = _handlers.pop()
        root_logger.removeHandler(handler)
        handler.close()
    _configured = False


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
