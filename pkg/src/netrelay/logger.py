"""Logging for netrelay: one package namespace, per-level switches from AppSettings."""

from __future__ import annotations

import logging
from threading import Lock
from typing import List, Optional

from .config import AppSettings, get_settings

LOGGER_NAME = "netrelay"
LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Highest level first; anything below INFO falls through to the debug switch.
_LEVEL_SWITCHES = (
    (logging.ERROR, "log_error_enabled"),
    (logging.WARNING, "log_warning_enabled"),
    (logging.INFO, "log_info_enabled"),
)


class _LevelToggleFilter(logging.Filter):
    """Drop records whose level is switched off in AppSettings."""

    def __init__(self, settings: AppSettings) -> None:
        super().__init__()
        self.update(settings)

    def update(self, settings: AppSettings) -> None:
        self._settings = settings

    def filter(self, record: logging.LogRecord) -> bool:  # noqa: D401
        for level, switch in _LEVEL_SWITCHES:
            if record.levelno >= level:
                return bool(getattr(self._settings, switch))
        return self._settings.log_debug_enabled


_setup_lock = Lock()
_filter: Optional[_LevelToggleFilter] = None


def _build_handlers(settings: AppSettings) -> List[logging.Handler]:
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if settings.log_file is not None:
        settings.log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(settings.log_file, encoding="utf-8"))
    return handlers


def configure_logging(settings: Optional[AppSettings] = None, *, force: bool = False) -> None:
    """Attach handlers to the ``netrelay`` logger once; later calls only refresh the level switches.

    ``force`` rebuilds the handlers, which is needed when ``log_file`` changes.
    """

    global _filter
    settings = settings or get_settings()
    with _setup_lock:
        if _filter is not None and not force:
            _filter.update(settings)
            return

        package_logger = logging.getLogger(LOGGER_NAME)
        for handler in list(package_logger.handlers):
            package_logger.removeHandler(handler)
            handler.close()

        _filter = _LevelToggleFilter(settings)
        formatter = logging.Formatter(LOG_FORMAT, LOG_DATE_FORMAT)
        for handler in _build_handlers(settings):
            handler.setLevel(logging.DEBUG)
            handler.setFormatter(formatter)
            handler.addFilter(_filter)
            package_logger.addHandler(handler)
        package_logger.setLevel(logging.DEBUG)
        package_logger.propagate = False
        logging.captureWarnings(True)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Logger for ``name`` under the ``netrelay`` namespace."""

    configure_logging()
    if not name or name == LOGGER_NAME or name.startswith(f"{LOGGER_NAME}."):
        return logging.getLogger(name or LOGGER_NAME)
    return logging.getLogger(f"{LOGGER_NAME}.{name}")
