"""Entry point for the segmentation toolkit.

This script wires together argument parsing, logging setup and the command
handlers, and maps failures to exit codes: 0 on success, 1 for usage and
configuration errors, 2 for data errors and missing inputs.

To see available options run:

```
python main.py --help
```
"""

from __future__ import annotations

import logging
import sys
from typing import Optional, Sequence

from config import SEMSEG_LOG_LEVEL
from errors import ConfigError, DataError
from ui import CommandError, parse_arguments, run_command

logger = logging.getLogger("semseg")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, SEMSEG_LOG_LEVEL, logging.INFO)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_arguments(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    configure_logging(args.verbose)

    try:
        return run_command(args)
    except CommandError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except ConfigError as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except DataError as exc:
        logger.error("Data error: %s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
