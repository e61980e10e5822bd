"""
Built-in run configurations.

``pritchard2010`` is the cold 87Rb ladder (5S1/2 -> 5P3/2 -> 60S1/2) with a
homogeneous 1.3 mm cloud; ``pritchard2010-gaussian`` is the same experiment
with the Gaussian density profile of equal optical depth.
"""

from typing import Callable, Dict

from core.exceptions import ConfigError
from core.units import TWO_PI, mhz_to_angular
from schemas.medium import MediumProfile, ProfileKind
from schemas.run_config import RunConfig
from schemas.system import AtomicSystem


def _rb87_60s() -> AtomicSystem:
    return AtomicSystem(
        gamma_e_pop=3.8e7,
        gamma_r_pop=5e3,
        linewidth_1ph=TWO_PI * 5.7e4,
        linewidth_2ph=TWO_PI * 1.1e5,
        c6=TWO_PI * 1.4e11,
        omega_c=mhz_to_angular(2.25),
        delta_c=mhz_to_angular(-0.1),
    )


def pritchard2010() -> RunConfig:
    return RunConfig(
        system=_rb87_60s(),
        medium=MediumProfile(
            kind=ProfileKind.HOMOGENEOUS,
            length=1300.0,
            rho_peak=1.2e7 * 1e-9,
            optical_depth=4.524,
        ),
    )


def pritchard2010_gaussian() -> RunConfig:
    return RunConfig(
        system=_rb87_60s(),
        medium=MediumProfile(
            kind=ProfileKind.GAUSSIAN,
            length=1300.0,
            rho_peak=1.32e7 * 1e-9,
            center=650.0,
            sigma_rho=700.0,
            optical_depth=4.524,
        ),
    )


PRESETS: Dict[str, Callable[[], RunConfig]] = {
    "pritchard2010": pritchard2010,
    "pritchard2010-gaussian": pritchard2010_gaussian,
}


def load_preset(name: str) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r} (one of {', '.join(PRESETS)})")
    return PRESETS[name]()
