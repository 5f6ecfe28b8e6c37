"""Logging helpers.

All loggers live under the `prm_weights` namespace and prefix their messages
with the project name, the same way MkDocs prefixes plugin messages.
"""

from __future__ import annotations

import logging
import sys

from mkdocs.plugins import PrefixedLogger

PREFIX = "prm-weights"


def get_logger(name: str) -> PrefixedLogger:
    """Return a prefixed logger for a module.

    Parameters:
        name: The module name, usually `__name__`.

    Returns:
        A logger adapter whose messages start with `prm-weights: `.
    """
    return PrefixedLogger(PREFIX, logging.getLogger(name))


def setup_logging(level: str = "WARNING") -> None:
    """Attach a stream handler to the package logger.

    Calling it again replaces the handler, so that it writes to the current standard error.

    Parameters:
        level: A logging level name.
    """
    root = logging.getLogger("prm_weights")
    for previous in root.handlers[:]:
        root.removeHandler(previous)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)-8s %(message)s"))
    root.addHandler(handler)
    root.setLevel(level.upper())
