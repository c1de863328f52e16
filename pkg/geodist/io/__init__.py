from .db import Database
from .io import emit, load_yaml, progress_bar
from .logging import LOG_FILENAME, logger

__all__ = [
    "Database",
    "emit",
    "load_yaml",
    "logger",
    "LOG_FILENAME",
    "progress_bar",
]
