import argparse
import logging
import sys
from typing import List, Optional

from core.config import get_settings
from core.exceptions import SimulationError
from routers import derived, linescan, propagate, spectrum

# Load process settings
settings = get_settings()


def configure_logging() -> None:
    handlers = [logging.StreamHandler()]
    if settings.LOG_FILE:
        handlers.append(logging.FileHandler(settings.LOG_FILE))
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydeit",
        description="Probe propagation through a Rydberg-EIT medium with superatom coarse-graining.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include command routers
    spectrum.register(subparsers)
    derived.register(subparsers)
    propagate.register(subparsers)
    linescan.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    logger = logging.getLogger("rydeit")
    args = build_parser().parse_args(argv)

    try:
        return args.handler(args)
    except SimulationError as e:
        logger.error(f"{args.command} failed: {e}")
        return 1
    except OSError as e:
        logger.error(f"{args.command} failed writing output: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
