"""Geodesic location and passage-time distributions in last passage percolation"""

from typing import Any, Optional, Sequence

import os
import platform
import signal
import sys
import time
from importlib import metadata as importlib_metadata

from geodist.base import Manager
from geodist.exceptions import GeodistError
from geodist.io import LOG_FILENAME, logger

# exit code of a run stopped with CTRL-C
INTERRUPTED = 130


def get_version() -> str:
    try:
        return importlib_metadata.version(__name__)
    except importlib_metadata.PackageNotFoundError:  # pragma: no cover
        return "unknown"


def __signal_handler(signum: int, frame: Any) -> None:
    """Callback for CTRL-C"""

    print("shutting down", file=sys.stderr)
    logger.info("run interrupted")
    sys.exit(INTERRUPTED)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one geodist subcommand and return its exit code

    Parameters
    ----------
    argv : `list`
        Command-line arguments without the program name; `sys.argv[1:]` when None

    Returns
    -------
    code : `int`
        0 on success, 2 for invalid input, 3 for a failed numerical check, 4 for an output error
    """

    logger.info("geodist started")
    logger.info(f"current working directory is `{os.getcwd()}`")
    logger.info(f"{platform.python_implementation()} {platform.python_version()} detected")

    # time it
    _startTime = time.time()

    try:
        core = Manager(argv, version=get_version())

        # if only wanting to print name of log name
        if core.args.log_fname:
            print(f"LOG FILENAME is: `{LOG_FILENAME}`")
            return 0

        core.write(core.execute())

    except SystemExit as e:
        # argparse usage errors and help
        return e.code if isinstance(e.code, int) else 2

    except GeodistError as e:
        logger.critical(f"{e}")
        return e.exit_code

    finally:
        _endTime = time.time()
        logger.info(f"[-- manager uptime: {_endTime - _startTime:.2f} sec --]")
        logger.info("geodist stopped")

    return 0


def main() -> None:
    """Console entry point"""

    # catch CTRL-C signal
    signal.signal(signal.SIGINT, __signal_handler)

    sys.exit(run())


if __name__ == "__main__":

    main()
