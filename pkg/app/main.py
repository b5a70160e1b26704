import argparse
import logging
import sys
from typing import List, Optional

from app.cli.commands import gen_data, oracle, report, simulate, train, validate
from app.core.config import settings
from app.core.errors import GranuloError

logger = logging.getLogger(__name__)

COMMANDS = (gen_data, train, simulate, validate, oracle, report)

# Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical failure
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="granulo",
        description="Rigid-grain simulation with configuration-space contact maps",
    )
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level (default from GRANULO_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args) or EXIT_OK
    except GranuloError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return e.exit_code
    except OSError as e:
        logger.error(f"{args.command} failed on I/O: {e}", exc_info=True)
        return EXIT_CONFIG
    except Exception as e:
        logger.error(f"Unhandled exception in {args.command}: {e}", exc_info=True)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
