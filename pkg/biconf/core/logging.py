"""Console logging for library and CLI output."""

import logging
import sys

from biconf.core.config import settings


def get_logger(name: str) -> logging.Logger:
    """Get a console logger at the configured level."""
    logger = logging.getLogger(name)

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%H:%M:%S",
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(getattr(logging, settings.logging.level.upper(), logging.INFO))
        logger.propagate = False

    return logger
