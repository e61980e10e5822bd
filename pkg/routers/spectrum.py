import argparse
import logging
from pathlib import Path

from core.units import angular_to_mhz
from crud.experiment import run_sweep
from dependencies.run_config import add_run_arguments, resolve_run_config
from utils.output import write_csv

logger = logging.getLogger(__name__)

SPECTRUM_HEADER = (
    "omega_p_in_MHz", "delta_p_MHz", "transmission", "transmission_stderr", "g2_out", "g2_stderr",
)


def register(subparsers) -> None:
    parser = subparsers.add_parser("spectrum", help="Transmission and g2 spectra -> spectrum.csv")
    add_run_arguments(parser)
    parser.set_defaults(handler=cmd_spectrum)


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Run the configured sweep and write one CSV row per (intensity, detuning)."""
    config = resolve_run_config(args)
    spec = config.sweep.to_spec()
    result = run_sweep(spec, config.system, config.medium, config.propagation)

    rows = [
        (
            angular_to_mhz(p.omega_p_in), angular_to_mhz(p.delta_p),
            p.transmission, p.transmission_stderr, p.g2_out, p.g2_stderr,
        )
        for p in result.points
    ]
    write_csv(Path(config.output.directory) / "spectrum.csv", SPECTRUM_HEADER, rows)

    if result.failed:
        logger.error(f"{len(result.failed)} sweep points failed; their rows are left empty")
        return 2
    return 0
