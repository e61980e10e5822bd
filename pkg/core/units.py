"""
Unit handling at the configuration boundary.

Internally every rate and frequency is an angular frequency in rad/s, every
length is in um and every number density is in um^-3. Configuration text
quotes ordinary frequencies (nu = omega / 2 pi) and must always carry a unit
suffix for dimensioned values.
"""

import math
import re
from enum import Enum
from typing import Dict, List

from core.exceptions import ConfigError

TWO_PI = 2.0 * math.pi


class QuantityKind(str, Enum):
    FREQUENCY = "frequency"
    RATE = "rate"
    C6 = "c6"
    LENGTH = "length"
    DENSITY = "density"


# Multipliers to the internal unit of each kind
UNIT_TABLE: Dict[QuantityKind, Dict[str, float]] = {
    QuantityKind.FREQUENCY: {
        "rad/s": 1.0,
        "Hz": TWO_PI,
        "kHz": TWO_PI * 1e3,
        "MHz": TWO_PI * 1e6,
    },
    QuantityKind.RATE: {
        "rad/s": 1.0,
        "s^-1": 1.0,
        "1/s": 1.0,
    },
    QuantityKind.C6: {
        "rad/s um^6": 1.0,
        "Hz um^6": TWO_PI,
        "MHz um^6": TWO_PI * 1e6,
    },
    QuantityKind.LENGTH: {
        "um": 1.0,
        "mm": 1e3,
        "m": 1e6,
    },
    QuantityKind.DENSITY: {
        "um^-3": 1.0,
        "mm^-3": 1e-9,
        "cm^-3": 1e-12,
    },
}

# Units used when a configuration is written back out; chosen so that the
# written value is the internal float itself and re-parsing is exact.
CANONICAL_UNIT: Dict[QuantityKind, str] = {
    QuantityKind.FREQUENCY: "rad/s",
    QuantityKind.RATE: "s^-1",
    QuantityKind.C6: "rad/s um^6",
    QuantityKind.LENGTH: "um",
    QuantityKind.DENSITY: "um^-3",
}

_QUANTITY_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(.*?)\s*$")


def mhz_to_angular(nu_mhz: float) -> float:
    """Ordinary frequency in MHz to angular frequency in rad/s."""
    return TWO_PI * nu_mhz * 1e6


def angular_to_mhz(omega: float) -> float:
    """Angular frequency in rad/s to ordinary frequency in MHz."""
    return omega / (TWO_PI * 1e6)


def _split(key: str, text: str):
    match = _QUANTITY_RE.match(text)
    if not match:
        raise ConfigError(key, f"cannot parse quantity {text!r}")
    return float(match.group(1)), " ".join(match.group(2).split())


def _scale(key: str, unit: str, kind: QuantityKind) -> float:
    if not unit:
        raise ConfigError(key, f"unit suffix required (one of {', '.join(UNIT_TABLE[kind])})")
    units = UNIT_TABLE[kind]
    if unit not in units:
        raise ConfigError(key, f"unknown unit {unit!r} (one of {', '.join(units)})")
    return units[unit]


def parse_quantity(key: str, text: str, kind: QuantityKind) -> float:
    """Parse ``"2.25 MHz"`` style text into the internal unit of ``kind``."""
    value, unit = _split(key, text)
    return value * _scale(key, unit, kind)


def parse_quantity_list(key: str, text: str, kind: QuantityKind) -> List[float]:
    """Parse ``"0.15, 0.5, 1.0 MHz"``; the trailing unit applies to every entry."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ConfigError(key, "empty list")
    _, unit = _split(key, parts[-1])
    factor = _scale(key, unit, kind)
    values = []
    for i, part in enumerate(parts):
        value, own_unit = _split(key, part)
        if own_unit and own_unit != unit:
            raise ConfigError(key, f"mixed units in list ({own_unit!r} vs {unit!r})")
        if not own_unit and i == len(parts) - 1:
            raise ConfigError(key, "unit suffix required")
        values.append(value * factor)
    return values


def format_quantity(value: float, kind: QuantityKind) -> str:
    """Write an internal value with its canonical unit (round-trips exactly)."""
    return f"{value!r} {CANONICAL_UNIT[kind]}"


def format_quantity_list(values: List[float], kind: QuantityKind) -> str:
    return ", ".join(repr(v) for v in values) + f" {CANONICAL_UNIT[kind]}"
