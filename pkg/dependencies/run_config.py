import argparse
import logging
from pathlib import Path

from core.exceptions import ConfigError
from schemas.propagation import PropagationMode
from schemas.run_config import RunConfig
from utils.config_parser import parse_bool, parse_config
from utils.presets import PRESETS, load_preset

logger = logging.getLogger(__name__)


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    """Options shared by every command that needs a run configuration."""
    parser.add_argument("--config", type=Path, default=None,
                        help="INI run configuration; applied on top of --preset when both are given.")
    parser.add_argument("--preset", choices=sorted(PRESETS), default=None,
                        help="Built-in parameter set.")
    parser.add_argument("--seed", type=int, default=None, help="Master PRNG seed (unsigned 64-bit).")
    parser.add_argument("--mode", choices=[m.value for m in PropagationMode], default=None,
                        help="Stochastic (sampled superatoms) or continuous (mean) propagation.")
    parser.add_argument("--realizations", type=int, default=None,
                        help="Realizations per sweep point (stochastic mode).")
    parser.add_argument("--out", type=Path, default=None, help="Output directory.")
    parser.add_argument("--g2-feedback", choices=("on", "off"), default=None,
                        help="off pins g2 to 1 along the whole medium.")


def resolve_run_config(args: argparse.Namespace) -> RunConfig:
    """Preset, then config file, then command-line overrides."""
    if args.preset is None and args.config is None:
        raise ConfigError("config", "either --config or --preset is required")

    config = load_preset(args.preset) if args.preset else None
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError("config", f"cannot read {args.config}: {e}")
        config = parse_config(text, base=config)

    propagation = {}
    if args.seed is not None:
        if not 0 <= args.seed < 2 ** 64:
            raise ConfigError("seed", "must satisfy 0 <= seed < 2^64")
        propagation["seed"] = args.seed
    if args.mode is not None:
        propagation["mode"] = PropagationMode(args.mode)
    if args.g2_feedback is not None:
        propagation["g2_feedback"] = parse_bool("g2_feedback", args.g2_feedback)

    sweep = {}
    if args.realizations is not None:
        if args.realizations < 1:
            raise ConfigError("realizations", "must satisfy realizations >= 1")
        sweep["n_realizations"] = args.realizations

    update = {}
    if propagation:
        update["propagation"] = config.propagation.model_copy(update=propagation)
    if sweep:
        update["sweep"] = config.sweep.model_copy(update=sweep)
    if args.out is not None:
        update["output"] = config.output.model_copy(update={"directory": str(args.out)})
    if update:
        config = config.model_copy(update=update)

    logger.debug(f"Resolved run configuration: {config.model_dump()}")
    return config
