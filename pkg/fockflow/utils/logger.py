"""
Logging utilities for fockflow
"""

import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

from rich.console import Console
from rich.logging import RichHandler

from ..config.settings import LoggingConfig

# chatty at DEBUG when --debug is on
QUIET_LOGGERS = ("matplotlib", "PIL")


def setup_logging(config: LoggingConfig, debug: bool = False, name: str = "fockflow") -> logging.Logger:
    """
    Configure the package logger

    Logs go to the configured file, else to a rich handler on stderr; stdout
    is reserved for artifacts.

    Args:
        config: Logging configuration
        debug: Force DEBUG level regardless of the configured one
        name: Logger name

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name)
    logger.handlers.clear()
    logger.setLevel(logging.DEBUG if debug else getattr(logging, config.level.upper(), logging.INFO))

    if config.file:
        path = Path(config.file)
        path.parent.mkdir(parents=True, exist_ok=True)
        handler: logging.Handler = logging.FileHandler(path)
    else:
        handler = RichHandler(
            console=Console(stderr=True),
            show_time=True,
            show_path=False,
            markup=False,
            rich_tracebacks=True,
        )
    handler.setFormatter(logging.Formatter(config.format))
    logger.addHandler(handler)
    logger.propagate = False

    for noisy in QUIET_LOGGERS:
        logging.getLogger(noisy).setLevel(logging.WARNING)
    return logger


def get_logger(name: str = "fockflow") -> logging.Logger:
    return logging.getLogger(name)


def _render(value: Any) -> str:
    if isinstance(value, complex):
        sign = "+" if value.imag >= 0 else "-"
        return f"{value.real:.6g}{sign}{abs(value.imag):.6g}i"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class ContextualLogger(logging.LoggerAdapter):
    """
    Logger adapter prefixing every message with key=value context

    Complex and float context values are shortened, e.g.
    ``[component=zero_search box=1-2i] ...``.
    """

    def __init__(self, logger: logging.Logger, context: Optional[Dict[str, Any]] = None):
        super().__init__(logger, dict(context or {}))

    @property
    def context(self) -> Dict[str, Any]:
        return self.extra

    def process(self, msg, kwargs):
        if self.extra:
            prefix = " ".join(f"{key}={_render(value)}" for key, value in self.extra.items())
            msg = f"[{prefix}] {msg}"
        return msg, kwargs

    def with_context(self, **context) -> "ContextualLogger":
        """A new adapter with extra context on top of this one's"""
        return ContextualLogger(self.logger, {**self.extra, **context})

    @contextmanager
    def timed(self, step: str) -> Iterator[Dict[str, float]]:
        """
        Log the wall time of a step

        Yields a dict whose "elapsed" entry holds the seconds taken once the
        block exits. Failed steps are logged at DEBUG and re-raised.
        """
        timing = {"elapsed": 0.0}
        started = time.perf_counter()
        try:
            yield timing
        except Exception as e:
            timing["elapsed"] = time.perf_counter() - started
            self.debug(f"{step} aborted after {timing['elapsed']:.2f}s: {e}")
            raise
        timing["elapsed"] = time.perf_counter() - started
        self.info(f"{step} finished in {timing['elapsed']:.2f}s")
