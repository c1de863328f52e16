"""Logger module

Records go to a rotating file and, for CRITICAL messages only, to stderr. The file is kept in
$XDG_CACHE_HOME/geodist when that directory is writable, otherwise in $HOME/.local/share/geodist,
otherwise in the temporary directory.
"""

from typing import Any, Dict, Optional

import getpass
import logging
import logging.config
import os
import tempfile
from pathlib import Path

__module_name__ = "geodist"


def _writable(directory: Optional[str]) -> bool:
    return bool(directory) and os.path.isdir(str(directory)) and os.access(str(directory), os.W_OK)


def log_filename() -> str:
    """Location of the log file, creating its directory when needed"""

    candidates = [os.environ.get("XDG_CACHE_HOME")]
    if "HOME" in os.environ:
        candidates.append(os.path.join(os.environ["HOME"], ".local", "share"))

    for base in candidates:
        if _writable(base):
            directory = Path(str(base)) / __module_name__
            directory.mkdir(parents=True, exist_ok=True)
            return str(directory / f"{__module_name__}.log")

    return os.path.join(tempfile.gettempdir(), f"{__module_name__}-{getpass.getuser()}.log")


LOG_FILENAME = log_filename()


def logging_config(filename: str = LOG_FILENAME) -> Dict[str, Any]:
    """dictConfig mapping of the `geodist` logger"""

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "short": {"format": "%(levelname)s -- %(message)s"},
            "long": {
                "format": "%(asctime)s -- %(levelname)s -- %(message)s "
                "(%(funcName)s in %(filename)s:%(lineno)s)"
            },
        },
        "handlers": {
            "file": {
                "level": "DEBUG",
                "class": "logging.handlers.RotatingFileHandler",
                "maxBytes": 1000000,
                "backupCount": 3,
                "formatter": "long",
                "filename": filename,
                # nothing is written until the first record
                "delay": True,
            },
            "console": {
                "level": "CRITICAL",
                "class": "logging.StreamHandler",
                "formatter": "short",
                "stream": "ext://sys.stderr",
            },
        },
        "loggers": {
            __module_name__: {"level": "INFO", "handlers": ["file", "console"], "propagate": False},
        },
    }


def set_logger() -> logging.Logger:
    """Build and return the package logger

    Returns
    -------
    logger : `Logger instance`
    """

    logging.config.dictConfig(logging_config())
    return logging.getLogger(__module_name__)


logger = set_logger()
