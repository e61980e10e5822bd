"""
Closed-form physics of the superatom EIT model.

Every function here is pure. Rates are angular frequencies (rad/s), lengths
are um and densities um^-3. Probe "intensity" ``i_p`` is the squared probe
Rabi frequency in rad^2/s^2. Functions taking ``i_p`` or a mean shift accept
numpy arrays (one entry per Monte-Carlo realization) as well as scalars.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Tuple, Union

import numpy as np

from core.exceptions import SimulationError

if TYPE_CHECKING:
    from schemas.system import AtomicSystem, DetuningPoint

ArrayLike = Union[float, np.ndarray]
Polarizability = Union[complex, np.ndarray]


def _unwrap(value: np.ndarray):
    return value.item() if value.ndim == 0 else value


def transverse_rates(system: "AtomicSystem") -> Tuple[float, float]:
    """Coherence decay rates including laser linewidths (gamma_e, gamma_r)."""
    gamma_e = system.gamma_e_pop / 2.0 + system.linewidth_1ph
    gamma_r = system.gamma_r_pop / 2.0 + system.linewidth_2ph
    return gamma_e, gamma_r


def blockade_radius(system: "AtomicSystem") -> float:
    """R_sa = (C6 / w)^(1/6) with w = |Omega_c|^2 / gamma_e, in um."""
    if system.omega_c <= 0:
        raise SimulationError("blockade radius diverges for omega_c = 0")
    gamma_e, _ = transverse_rates(system)
    return (system.c6 * gamma_e / system.omega_c ** 2) ** (1.0 / 6.0)


def superatom_volume(system: "AtomicSystem") -> float:
    """V_sa = 4 pi R_sa^3 / 3, in um^3."""
    return 4.0 * math.pi / 3.0 * blockade_radius(system) ** 3


def superatom_density(system: "AtomicSystem") -> float:
    """rho_sa = 1 / V_sa = (3 / 4 pi) sqrt(|Omega_c|^2 / (gamma_e C6)), in um^-3."""
    if system.omega_c <= 0:
        raise SimulationError("superatom density undefined for omega_c = 0")
    gamma_e, _ = transverse_rates(system)
    return 3.0 / (4.0 * math.pi) * math.sqrt(system.omega_c ** 2 / (gamma_e * system.c6))


def sigma_rr(system: "AtomicSystem", detuning: "DetuningPoint", n_sa: ArrayLike, i_p: ArrayLike) -> ArrayLike:
    """Saturable collective Rydberg population of one superatom.

    Returns |Oc|^2 n I / (|Oc|^2 n I + (|Oc|^2 - Dp D2)^2 + D2^2 ge^2), and 0
    where the denominator vanishes.
    """
    gamma_e, _ = transverse_rates(system)
    oc2 = system.omega_c ** 2
    drive = oc2 * np.asarray(n_sa, dtype=float) * np.asarray(i_p, dtype=float)
    detuned = (oc2 - detuning.delta_p * detuning.delta_2) ** 2 + (detuning.delta_2 * gamma_e) ** 2
    denominator = drive + detuned
    with np.errstate(divide="ignore", invalid="ignore"):
        population = np.where(denominator > 0, drive / np.where(denominator > 0, denominator, 1.0), 0.0)
    return _unwrap(np.asarray(population))


def alpha_tla(system: "AtomicSystem", detuning: "DetuningPoint") -> complex:
    """Two-level polarizability i ge / (ge - i Dp)."""
    gamma_e, _ = transverse_rates(system)
    return 1j * gamma_e / (gamma_e - 1j * detuning.delta_p)


def alpha_eit(system: "AtomicSystem", detuning: "DetuningPoint", mean_shift: ArrayLike = 0.0) -> Polarizability:
    """EIT polarizability with the two-photon detuning shifted by ``mean_shift``.

    The ideal dark resonance (gamma_r = 0 and D2 equal to the shift) gives
    exactly 0.
    """
    gamma_e, gamma_r = transverse_rates(system)
    oc2 = system.omega_c ** 2
    if oc2 == 0:
        tla = alpha_tla(system, detuning)
        return _unwrap(np.full(np.shape(mean_shift), tla, dtype=complex))

    inner = gamma_r - 1j * (detuning.delta_2 - np.asarray(mean_shift, dtype=float))
    dark = inner == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        safe_inner = np.where(dark, 1.0, inner)
        value = 1j * gamma_e / (gamma_e - 1j * detuning.delta_p + oc2 / safe_inner)
    return _unwrap(np.where(dark, 0j, value))


def mean_field_shift(system: "AtomicSystem", sigma_rr_uncond: ArrayLike) -> ArrayLike:
    """Mean VdW shift from external superatoms, (w / 8) <Sigma_RR>, rad/s."""
    gamma_e, _ = transverse_rates(system)
    w = system.omega_c ** 2 / gamma_e
    return _unwrap(np.asarray(w / 8.0 * np.asarray(sigma_rr_uncond, dtype=float)))


def alpha_conditional(a_tla: Polarizability, a_eit: Polarizability, p_exc: ArrayLike) -> Polarizability:
    """Polarizability conditioned on a photon being present: p a_TLA + (1 - p) a_EIT."""
    p = np.asarray(p_exc, dtype=float)
    return _unwrap(np.asarray(p * a_tla + (1.0 - p) * a_eit))
