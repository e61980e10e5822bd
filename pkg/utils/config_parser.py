"""
INI-style run configuration files.

Sections: [system], [medium], [sweep], [propagation], [output]. Dimensioned
values need a unit suffix (``omega_c = 2.25 MHz``, ``length = 1.3 mm``,
``rho_peak = 1.2e7 mm^-3``); lists share their trailing unit
(``omega_p_inputs = 0.15, 0.5, 1.0 MHz``). Unknown sections and keys are
rejected.
"""

import configparser
import io
import logging
from typing import Any, Callable, Dict, Optional

from pydantic import BaseModel, ValidationError

from core.exceptions import ConfigError
from core.units import (
    QuantityKind, format_quantity, format_quantity_list, parse_quantity, parse_quantity_list,
)
from schemas.medium import MediumProfile
from schemas.propagation import PropagationConfig
from schemas.run_config import OutputSection, RunConfig, SweepSection
from schemas.system import AtomicSystem

logger = logging.getLogger(__name__)

_TRUE = {"on", "true", "yes", "1"}
_FALSE = {"off", "false", "no", "0"}


def parse_bool(key: str, text: str) -> bool:
    value = text.strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ConfigError(key, f"expected on/off, got {text!r}")


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}")


def _parse_float(key: str, text: str) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise ConfigError(key, f"expected a dimensionless number, got {text!r}")


def _quantity(kind: QuantityKind) -> Callable[[str, str], float]:
    return lambda key, text: parse_quantity(key, text, kind)


def _quantity_list(kind: QuantityKind) -> Callable[[str, str], list]:
    return lambda key, text: parse_quantity_list(key, text, kind)


def _text(key: str, text: str) -> str:
    return text.strip()


# section -> key -> parser
FIELD_PARSERS: Dict[str, Dict[str, Callable[[str, str], Any]]] = {
    "system": {
        "gamma_e_pop": _quantity(QuantityKind.RATE),
        "gamma_r_pop": _quantity(QuantityKind.RATE),
        "linewidth_1ph": _quantity(QuantityKind.FREQUENCY),
        "linewidth_2ph": _quantity(QuantityKind.FREQUENCY),
        "c6": _quantity(QuantityKind.C6),
        "omega_c": _quantity(QuantityKind.FREQUENCY),
        "delta_c": _quantity(QuantityKind.FREQUENCY),
    },
    "medium": {
        "kind": _text,
        "length": _quantity(QuantityKind.LENGTH),
        "rho_peak": _quantity(QuantityKind.DENSITY),
        "center": _quantity(QuantityKind.LENGTH),
        "sigma_rho": _quantity(QuantityKind.LENGTH),
        "optical_depth": _parse_float,
    },
    "sweep": {
        "delta_p_min": _quantity(QuantityKind.FREQUENCY),
        "delta_p_max": _quantity(QuantityKind.FREQUENCY),
        "delta_p_points": _parse_int,
        "omega_p_inputs": _quantity_list(QuantityKind.FREQUENCY),
        "n_realizations": _parse_int,
        "g2_input": _parse_float,
        "peak_window": _quantity(QuantityKind.FREQUENCY),
    },
    "propagation": {
        "mode": _text,
        "seed": _parse_int,
        "substeps": _parse_int,
        "g2_feedback": parse_bool,
        "g2_population": _text,
        "volume_scale": _parse_float,
    },
    "output": {
        "directory": _text,
        "json_report": parse_bool,
    },
}

SECTION_MODELS: Dict[str, type] = {
    "system": AtomicSystem,
    "medium": MediumProfile,
    "sweep": SweepSection,
    "propagation": PropagationConfig,
    "output": OutputSection,
}

REQUIRED_SECTIONS = ("system", "medium")


def _config_error(section: str, error: ValidationError) -> ConfigError:
    first = error.errors()[0]
    loc = ".".join(str(part) for part in first["loc"] if not isinstance(part, int))
    key = f"{section}.{loc}" if loc else section
    ctx = first.get("ctx") or {}
    if first["type"] == "missing":
        return ConfigError(key, "missing required key")
    for op, symbol in (("gt", ">"), ("ge", ">="), ("lt", "<"), ("le", "<=")):
        if op in ctx:
            return ConfigError(key, f"must satisfy {loc or section} {symbol} {ctx[op]}")
    return ConfigError(key, first["msg"])


def _read_sections(text: str) -> Dict[str, Dict[str, Any]]:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError("config", f"malformed configuration: {e}")

    parsed: Dict[str, Dict[str, Any]] = {}
    for section in parser.sections():
        if section not in FIELD_PARSERS:
            raise ConfigError(section, f"unknown section (one of {', '.join(FIELD_PARSERS)})")
        parsers = FIELD_PARSERS[section]
        values = {}
        for key, raw in parser.items(section):
            name = f"{section}.{key}"
            if key not in parsers:
                raise ConfigError(name, "unknown key")
            values[key] = parsers[key](name, raw)
        parsed[section] = values
    return parsed


def parse_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Parse and validate configuration text, optionally on top of ``base``."""
    sections = _read_sections(text)
    if base is None:
        for section in REQUIRED_SECTIONS:
            if section not in sections:
                raise ConfigError(section, "missing section")

    validated: Dict[str, BaseModel] = {}
    for section, model in SECTION_MODELS.items():
        values = dict(getattr(base, section).model_dump()) if base is not None else {}
        values.update(sections.get(section, {}))
        if base is None and section not in sections:
            continue
        try:
            validated[section] = model.model_validate(values)
        except ValidationError as e:
            raise _config_error(section, e)

    config = RunConfig(**validated)
    logger.debug(f"Parsed run configuration: {config.model_dump()}")
    return config


def dump_config(config: RunConfig) -> str:
    """Write a configuration that ``parse_config`` reads back to an equal one."""
    system, medium, sweep = config.system, config.medium, config.sweep
    sections: Dict[str, Dict[str, str]] = {
        "system": {
            "gamma_e_pop": format_quantity(system.gamma_e_pop, QuantityKind.RATE),
            "gamma_r_pop": format_quantity(system.gamma_r_pop, QuantityKind.RATE),
            "linewidth_1ph": format_quantity(system.linewidth_1ph, QuantityKind.FREQUENCY),
            "linewidth_2ph": format_quantity(system.linewidth_2ph, QuantityKind.FREQUENCY),
            "c6": format_quantity(system.c6, QuantityKind.C6),
            "omega_c": format_quantity(system.omega_c, QuantityKind.FREQUENCY),
            "delta_c": format_quantity(system.delta_c, QuantityKind.FREQUENCY),
        },
        "medium": {
            "kind": medium.kind.value,
            "length": format_quantity(medium.length, QuantityKind.LENGTH),
            "rho_peak": format_quantity(medium.rho_peak, QuantityKind.DENSITY),
            "optical_depth": repr(medium.optical_depth),
        },
        "sweep": {
            "delta_p_min": format_quantity(sweep.delta_p_min, QuantityKind.FREQUENCY),
            "delta_p_max": format_quantity(sweep.delta_p_max, QuantityKind.FREQUENCY),
            "delta_p_points": str(sweep.delta_p_points),
            "omega_p_inputs": format_quantity_list(sweep.omega_p_inputs, QuantityKind.FREQUENCY),
            "n_realizations": str(sweep.n_realizations),
            "g2_input": repr(sweep.g2_input),
        },
        "propagation": {
            "mode": config.propagation.mode.value,
            "seed": str(config.propagation.seed),
            "substeps": str(config.propagation.substeps),
            "g2_feedback": "on" if config.propagation.g2_feedback else "off",
            "g2_population": config.propagation.g2_population.value,
            "volume_scale": repr(config.propagation.volume_scale),
        },
        "output": {
            "directory": config.output.directory,
            "json_report": "on" if config.output.json_report else "off",
        },
    }
    if medium.center is not None:
        sections["medium"]["center"] = format_quantity(medium.center, QuantityKind.LENGTH)
    if medium.sigma_rho is not None:
        sections["medium"]["sigma_rho"] = format_quantity(medium.sigma_rho, QuantityKind.LENGTH)
    if sweep.peak_window is not None:
        sections["sweep"]["peak_window"] = format_quantity(sweep.peak_window, QuantityKind.FREQUENCY)

    writer = configparser.ConfigParser(interpolation=None)
    writer.optionxform = str
    writer.read_dict(sections)
    buffer = io.StringIO()
    writer.write(buffer)
    return buffer.getvalue()
