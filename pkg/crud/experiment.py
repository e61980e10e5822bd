from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from core.config import get_settings
from core.exceptions import LineExtractionError, SimulationError
from core.physics import alpha_eit, alpha_tla, blockade_radius, superatom_density, superatom_volume
from core.units import angular_to_mhz
from crud.medium import build_grid, mean_density
from crud.propagation import run_realizations
from schemas.experiment import DerivedReport, LineObservables, SpectrumPoint, SpectrumResult, SweepSpec
from schemas.medium import MediumProfile, SuperatomGrid
from schemas.propagation import FieldState, PropagationConfig
from schemas.system import AtomicSystem, DetuningPoint
from utils.rng import SeededRNG

logger = logging.getLogger(__name__)

QUOTED_ANTIBUNCHING_WINDOW_NS = 1.6


def two_level_transmission(system: AtomicSystem, medium: MediumProfile, detuning: DetuningPoint) -> float:
    """Beer-Lambert transmission of the bare two-level line."""
    return math.exp(-medium.optical_depth * alpha_tla(system, detuning).imag)


def weak_probe_transmission(system: AtomicSystem, medium: MediumProfile, detuning: DetuningPoint) -> float:
    """Linear EIT transmission exp(-OD Im a_EIT) without Rydberg excitation."""
    return math.exp(-medium.optical_depth * alpha_eit(system, detuning, 0.0).imag)


def _run_point(
    spec: SweepSpec,
    grid: SuperatomGrid,
    system: AtomicSystem,
    config: PropagationConfig,
    intensity_index: int,
    detuning_index: int,
) -> SpectrumPoint:
    omega_p = spec.omega_p_inputs[intensity_index]
    detuning = DetuningPoint.at(system, spec.delta_p_values[detuning_index])
    point = SpectrumPoint(
        intensity_index=intensity_index,
        detuning_index=detuning_index,
        omega_p_in=omega_p,
        delta_p=detuning.delta_p,
        delta_2=detuning.delta_2,
    )
    try:
        summary = run_realizations(
            FieldState(i_p=omega_p ** 2, g2=spec.g2_input),
            grid, system, detuning, config, spec.n_realizations,
            stream=SeededRNG(config.seed).child(intensity_index, detuning_index),
        )
    except SimulationError as e:
        logger.warning(
            f"Sweep point omega_p={angular_to_mhz(omega_p):.4g} MHz, "
            f"delta_p={angular_to_mhz(detuning.delta_p):.4g} MHz failed: {e}"
        )
        return point.model_copy(update={"error": str(e)})

    return point.model_copy(update={
        "transmission": min(max(summary.transmission, 0.0), 1.0),
        "transmission_stderr": summary.transmission_stderr,
        "g2_out": summary.g2_out,
        "g2_stderr": summary.g2_stderr,
        "i_p_out": summary.i_p_out,
    })


def _run_point_task(args: Tuple) -> SpectrumPoint:
    return _run_point(*args)


def run_sweep(
    spec: SweepSpec,
    system: AtomicSystem,
    medium: MediumProfile,
    config: PropagationConfig,
    workers: Optional[int] = None,
) -> SpectrumResult:
    """Transmission and g2 for every (input Rabi frequency, probe detuning) pair.

    Point (i, j) draws from the stream keyed (seed, i, j), so the result does
    not depend on the order or the process in which points run.
    """
    workers = workers if workers is not None else get_settings().SWEEP_WORKERS
    grid = build_grid(medium, system, config.volume_scale)
    tasks = [
        (spec, grid, system, config, i, j)
        for i in range(len(spec.omega_p_inputs))
        for j in range(len(spec.delta_p_values))
    ]
    logger.info(
        f"Running sweep: {len(spec.omega_p_inputs)} intensities x {len(spec.delta_p_values)} detunings, "
        f"mode={config.mode.value}, realizations={spec.n_realizations}, cells={len(grid.cells)}, "
        f"g2_feedback={config.g2_feedback}, workers={workers}"
    )

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_run_point_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        points = [_run_point(*task) for task in tasks]

    detunings = [DetuningPoint.at(system, d) for d in spec.delta_p_values]
    result = SpectrumResult(
        delta_p_values=list(spec.delta_p_values),
        delta_2_values=[d.delta_2 for d in detunings],
        omega_p_inputs=list(spec.omega_p_inputs),
        background=[two_level_transmission(system, medium, d) for d in detunings],
        peak_window=spec.peak_window if spec.peak_window is not None else system.omega_c,
        g2_feedback=config.g2_feedback,
        points=points,
    )
    if result.failed:
        logger.warning(f"{len(result.failed)} of {len(points)} sweep points failed")
    return result


def _refine_peak(x: np.ndarray, y: np.ndarray, k: int) -> float:
    """Vertex of the parabola through the three samples around index k."""
    if k == 0 or k == len(x) - 1:
        return float(x[k])
    a, b, _ = np.polyfit(x[k - 1:k + 2], y[k - 1:k + 2], 2)
    if a >= 0:
        return float(x[k])
    return float(np.clip(-b / (2.0 * a), x[k - 1], x[k + 1]))


def _half_crossing(x: np.ndarray, y: np.ndarray, k: int, level: float, step: int) -> Optional[float]:
    j = k
    while 0 <= j + step < len(x):
        nxt = j + step
        if not np.isfinite(y[nxt]):
            return None
        if y[nxt] <= level:
            return float(x[j] + (level - y[j]) * (x[nxt] - x[j]) / (y[nxt] - y[j]))
        j = nxt
    return None


def _extract_series(result: SpectrumResult, intensity_index: int) -> LineObservables:
    """Observables of one transmission series; raises LineExtractionError when there is no line."""
    omega_p = result.omega_p_inputs[intensity_index]
    series = result.series(intensity_index)
    x = np.array(result.delta_p_values)
    y = np.array([p.transmission if p.ok else np.nan for p in series], dtype=float)
    background = np.array(result.background)

    in_window = (np.abs(np.array(result.delta_2_values)) < result.peak_window) & np.isfinite(y)
    candidates = np.flatnonzero(in_window)
    if candidates.size < 3:
        raise LineExtractionError("fewer than three points in the peak window")

    k = int(candidates[np.argmax(y[candidates])])
    if k in (candidates[0], candidates[-1]) or y[k] <= background[k]:
        raise LineExtractionError("no EIT line")

    t_max = float(y[k])
    level = background[k] + 0.5 * (t_max - background[k])
    left = _half_crossing(x, y, k, level, -1)
    right = _half_crossing(x, y, k, level, +1)
    if left is None or right is None or right <= left:
        raise LineExtractionError("half maximum not reached inside the scan")

    return LineObservables(
        omega_p_in=omega_p,
        t_max=t_max,
        fwhm=right - left,
        delta_p_max=_refine_peak(x, y, k),
    )


def extract_line(spec: SweepSpec, result: SpectrumResult) -> List[LineObservables]:
    """Peak transmission, FWHM above the two-level background, and peak detuning per input."""
    lines = []
    for i, omega_p in enumerate(spec.omega_p_inputs):
        try:
            lines.append(_extract_series(result, i))
        except LineExtractionError as e:
            logger.warning(f"omega_p={angular_to_mhz(omega_p):.4g} MHz: {e}")
            lines.append(LineObservables(omega_p_in=omega_p, found=False, reason=str(e)))
    return lines


def line_scan(
    spec: SweepSpec,
    system: AtomicSystem,
    medium: MediumProfile,
    config: PropagationConfig,
    workers: Optional[int] = None,
) -> List[Tuple[bool, LineObservables]]:
    """Line observables versus input intensity, with and without g2 feedback."""
    rows = []
    for feedback in (True, False):
        result = run_sweep(spec, system, medium, config.model_copy(update={"g2_feedback": feedback}), workers)
        rows.extend((feedback, line) for line in extract_line(spec, result))
    return rows


def derived_quantities(
    system: AtomicSystem,
    medium: MediumProfile,
    omega_p_inputs: Sequence[float] = (),
) -> DerivedReport:
    """Blockade, density, group-velocity and saturation scales of a run."""
    r_sa = blockade_radius(system)
    rho_sa = superatom_density(system)
    rho_mean = mean_density(medium)
    kappa_mean = medium.optical_depth / medium.length
    oc2 = system.omega_c_sq

    # kappa in um^-1 gives um/s
    group_velocity = 2.0 * oc2 / (kappa_mean * system.gamma_e) * 1e-6
    saturation_intensity = 4.0 * rho_sa / rho_mean * oc2
    window_ns = 2.0 * r_sa * 1e-6 / group_velocity * 1e9

    return DerivedReport(
        r_sa=r_sa,
        v_sa=superatom_volume(system),
        rho_sa=rho_sa,
        rho_mean=rho_mean,
        n_sa_mean=rho_mean / rho_sa,
        kappa_mean=kappa_mean,
        eit_halfwidth=system.eit_halfwidth,
        group_velocity_m_s=group_velocity,
        saturation_intensity=saturation_intensity,
        saturation_rabi_mhz=angular_to_mhz(math.sqrt(saturation_intensity)),
        antibunching_window_ns=window_ns,
        quoted_antibunching_window_ns=QUOTED_ANTIBUNCHING_WINDOW_NS,
        antibunching_window_discrepancy=abs(window_ns - QUOTED_ANTIBUNCHING_WINDOW_NS) > 0.1 * QUOTED_ANTIBUNCHING_WINDOW_NS,
        photon_density_at_inputs=[
            [angular_to_mhz(omega_p), rho_mean / 4.0 * omega_p ** 2 / oc2] for omega_p in omega_p_inputs
        ],
    )
