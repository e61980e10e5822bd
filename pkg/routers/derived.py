import argparse
import logging
from pathlib import Path

from crud.experiment import derived_quantities
from dependencies.run_config import add_run_arguments, resolve_run_config
from utils.output import render_derived, write_json, write_text

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("derived", help="Blockade radius, group velocity and saturation scales")
    add_run_arguments(parser)
    parser.add_argument("--json", action="store_true", help="Also write derived.json.")
    parser.set_defaults(handler=cmd_derived)


def cmd_derived(args: argparse.Namespace) -> int:
    config = resolve_run_config(args)
    report = derived_quantities(config.system, config.medium, config.sweep.omega_p_inputs)
    text = render_derived(report)
    print(text, end="")

    out_dir = Path(config.output.directory)
    write_text(out_dir / "derived.txt", text)
    if args.json or config.output.json_report:
        write_json(out_dir / "derived.json", report.model_dump())
    if report.antibunching_window_discrepancy:
        logger.warning(
            f"Antibunching window {report.antibunching_window_ns:.3g} ns differs from the quoted "
            f"{report.quoted_antibunching_window_ns} ns"
        )
    return 0
