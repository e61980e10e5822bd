import argparse
import logging
from pathlib import Path

from core.units import mhz_to_angular
from crud.medium import build_grid
from crud.propagation import propagate
from dependencies.run_config import add_run_arguments, resolve_run_config
from schemas.propagation import FieldState, PropagationMode
from schemas.system import DetuningPoint
from utils.output import write_csv
from utils.rng import SeededRNG

logger = logging.getLogger(__name__)

TRACE_HEADER = ("z_mid_um", "p_excited", "sampled", "alpha_real", "alpha_imag", "i_p", "g2")


def register(subparsers) -> None:
    parser = subparsers.add_parser("propagate", help="Per-cell trace of one realization -> trace.csv")
    add_run_arguments(parser)
    parser.add_argument("--omega-p", type=float, default=None,
                        help="Input probe Rabi frequency / 2pi in MHz (default: first sweep input).")
    parser.add_argument("--delta-p", type=float, default=None,
                        help="Probe detuning / 2pi in MHz (default: two-photon resonance).")
    parser.set_defaults(handler=cmd_propagate)


def cmd_propagate(args: argparse.Namespace) -> int:
    """Dump the cell-by-cell state of a single realization (realization 0 of the seed)."""
    config = resolve_run_config(args)
    system = config.system
    omega_p = mhz_to_angular(args.omega_p) if args.omega_p is not None else config.sweep.omega_p_inputs[0]
    if args.delta_p is not None:
        detuning = DetuningPoint.at(system, mhz_to_angular(args.delta_p))
    else:
        detuning = DetuningPoint.at_two_photon(system, 0.0)

    grid = build_grid(config.medium, system, config.propagation.volume_scale)
    rng = None
    if config.propagation.mode == PropagationMode.STOCHASTIC:
        rng = SeededRNG(config.propagation.seed).child(0).generator()
    exit_state, trace = propagate(
        FieldState(i_p=omega_p ** 2, g2=config.sweep.g2_input), grid, system, detuning, config.propagation, rng
    )

    rows = [
        (
            r.z_mid, r.p_excited, "" if r.sampled is None else int(r.sampled),
            r.alpha_real, r.alpha_imag, r.i_p, r.g2,
        )
        for r in trace.records
    ]
    write_csv(Path(config.output.directory) / "trace.csv", TRACE_HEADER, rows)
    logger.info(
        f"Exit state: transmission={exit_state.i_p / omega_p ** 2:.6g}, g2={exit_state.g2:.6g} "
        f"after {len(grid.cells)} cells"
    )
    return 0
