import argparse
import logging
from pathlib import Path

from core.units import angular_to_mhz
from crud.experiment import line_scan
from dependencies.run_config import add_run_arguments, resolve_run_config
from utils.output import write_csv

logger = logging.getLogger(__name__)

LINES_HEADER = ("omega_p_in_MHz", "g2_feedback", "t_max", "fwhm_MHz", "delta_p_max_MHz")


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "linescan", help="Peak transmission, linewidth and line position vs input, g2 feedback on and off"
    )
    add_run_arguments(parser)
    parser.set_defaults(handler=cmd_linescan)


def _mhz(value):
    return None if value is None else angular_to_mhz(value)


def cmd_linescan(args: argparse.Namespace) -> int:
    config = resolve_run_config(args)
    rows = line_scan(config.sweep.to_spec(), config.system, config.medium, config.propagation)
    write_csv(
        Path(config.output.directory) / "lines.csv",
        LINES_HEADER,
        [
            (angular_to_mhz(line.omega_p_in), "on" if feedback else "off",
             line.t_max, _mhz(line.fwhm), _mhz(line.delta_p_max))
            for feedback, line in rows
        ],
    )
    missing = [line for _, line in rows if not line.found]
    if missing:
        logger.error(f"No EIT line found for {len(missing)} of {len(rows)} spectra")
        return 2
    return 0
