import math

import numpy as np
import pytest
from scipy.optimize import brentq, minimize_scalar

from core.exceptions import LineExtractionError, PropagationError
from core.units import angular_to_mhz, mhz_to_angular
from crud.experiment import (
    _extract_series, derived_quantities, extract_line, line_scan, run_sweep,
    two_level_transmission, weak_probe_transmission,
)
from crud.medium import build_grid
from crud.propagation import run_realizations
from schemas.experiment import SpectrumPoint, SpectrumResult, SweepSpec
from schemas.propagation import FieldState
from schemas.run_config import SweepSection
from schemas.system import DetuningPoint
from utils.rng import SeededRNG


def _spec(lo_mhz, hi_mhz, points, inputs_mhz, **kwargs) -> SweepSpec:
    return SweepSpec(
        delta_p_values=[mhz_to_angular(nu) for nu in np.linspace(lo_mhz, hi_mhz, points)],
        omega_p_inputs=[mhz_to_angular(nu) for nu in inputs_mhz],
        **kwargs,
    )


def test_default_detunings():
    values = SweepSection().detunings()
    assert len(values) == 201
    assert values[0] == pytest.approx(mhz_to_angular(-15.0))
    assert values[100] == pytest.approx(0.0, abs=1e-6)
    assert values[-1] == pytest.approx(mhz_to_angular(15.0))


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(delta_p_values=[1.0, 1.0], omega_p_inputs=[1.0])
    with pytest.raises(ValueError):
        SweepSpec(delta_p_values=[1.0], omega_p_inputs=[0.0])


def test_single_point_sweep_equals_realization_run(system, medium, stochastic):
    delta_p = -system.delta_c
    omega_p = mhz_to_angular(0.5)
    spec = SweepSpec(delta_p_values=[delta_p], omega_p_inputs=[omega_p], n_realizations=6)
    result = run_sweep(spec, system, medium, stochastic, workers=1)

    d = DetuningPoint.at(system, delta_p)
    summary = run_realizations(
        FieldState(i_p=omega_p ** 2), build_grid(medium, system), system, d, stochastic, 6,
        stream=SeededRNG(stochastic.seed).child(0, 0),
    )
    point = result.points[0]
    assert point.transmission == summary.transmission
    assert point.g2_out == summary.g2_out
    assert point.transmission_stderr == summary.transmission_stderr


def test_sweep_layout_and_background(system, medium, continuous):
    spec = _spec(-2, 2, 5, [0.2, 0.8])
    result = run_sweep(spec, system, medium, continuous, workers=1)
    assert len(result.points) == 10
    assert [(p.intensity_index, p.detuning_index) for p in result.series(1)] == [(1, j) for j in range(5)]
    assert result.peak_window == system.omega_c
    assert result.delta_2_values == pytest.approx([d + system.delta_c for d in spec.delta_p_values])
    for delta_p, background in zip(spec.delta_p_values, result.background):
        assert background == two_level_transmission(system, medium, DetuningPoint.at(system, delta_p))
    assert not result.failed


def test_sweep_is_deterministic(system, medium, stochastic):
    spec = _spec(-1, 1, 7, [0.5, 1.0], n_realizations=4)
    assert run_sweep(spec, system, medium, stochastic, workers=1) == run_sweep(spec, system, medium, stochastic, workers=1)


def test_sweep_independent_of_worker_count(system, medium, stochastic):
    spec = _spec(-1, 1, 9, [0.5, 1.0], n_realizations=3)
    serial = run_sweep(spec, system, medium, stochastic, workers=1)
    parallel = run_sweep(spec, system, medium, stochastic, workers=2)
    assert parallel == serial


def test_continuous_sweep_invariant_under_input_order(system, medium, continuous):
    forward = run_sweep(_spec(-1, 1, 5, [0.3, 0.9]), system, medium, continuous, workers=1)
    backward = run_sweep(_spec(-1, 1, 5, [0.9, 0.3]), system, medium, continuous, workers=1)
    for i, j in ((0, 1), (1, 0)):
        assert [p.transmission for p in forward.series(i)] == [p.transmission for p in backward.series(j)]
        assert [p.g2_out for p in forward.series(i)] == [p.g2_out for p in backward.series(j)]


def test_failed_point_is_recorded(system, medium, continuous, monkeypatch):
    import crud.experiment as experiment

    real = experiment.run_realizations

    def flaky(state, grid, system, detuning, config, n, stream=None):
        if detuning.delta_p > 0:
            raise PropagationError("non-finite field state", cell_index=3, z=40.0)
        return real(state, grid, system, detuning, config, n, stream=stream)

    monkeypatch.setattr(experiment, "run_realizations", flaky)
    result = run_sweep(_spec(-1, 1, 3, [0.5]), system, medium, continuous, workers=1)
    assert [p.ok for p in result.points] == [True, True, False]
    assert result.points[2].transmission is None
    assert "cell 3" in result.points[2].error
    assert len(result.failed) == 1


def test_symmetric_line_peaks_at_zero(system, medium, continuous):
    symmetric = system.model_copy(update={"delta_c": 0.0})
    spec = _spec(-3, 3, 61, [0.01])
    [line] = extract_line(spec, run_sweep(spec, symmetric, medium, continuous, workers=1))
    assert line.found
    assert line.delta_p_max == pytest.approx(0.0, abs=mhz_to_angular(1e-3))


def _oracle_fwhm(system, medium) -> float:
    def t(delta_p):
        return weak_probe_transmission(system, medium, DetuningPoint.at(system, delta_p))

    center = -system.delta_c
    peak = minimize_scalar(
        lambda x: -t(x), bounds=(center - 0.2 * system.omega_c, center + 0.2 * system.omega_c), method="bounded",
        options={"xatol": 1.0},
    ).x
    background = two_level_transmission(system, medium, DetuningPoint.at(system, peak))
    level = background + 0.5 * (t(peak) - background)
    left = brentq(lambda x: t(x) - level, peak - system.omega_c, peak)
    right = brentq(lambda x: t(x) - level, peak, peak + system.omega_c)
    return right - left


def test_weak_field_linewidth_matches_closed_form(system, medium, continuous):
    spec = _spec(-4, 4, 161, [0.01])
    [line] = extract_line(spec, run_sweep(spec, system, medium, continuous, workers=1))
    assert line.found
    assert line.fwhm == pytest.approx(_oracle_fwhm(system, medium), rel=0.03)
    assert line.t_max == pytest.approx(weak_probe_transmission(system, medium, DetuningPoint.at_two_photon(system, 0.0)), abs=0.01)


def test_peak_transmission_falls_with_input(system, medium, continuous):
    spec = _spec(-4, 4, 161, [0.15, 0.5, 1.0])
    lines = extract_line(spec, run_sweep(spec, system, medium, continuous, workers=1))
    assert all(line.found for line in lines)
    t_max = [line.t_max for line in lines]
    assert t_max[0] > t_max[1] > t_max[2]
    positions = [line.delta_p_max for line in lines]
    assert max(positions) - min(positions) < 0.25 * lines[0].fwhm


@pytest.mark.slow
def test_default_sweep_lines(system, preset_config, medium, continuous):
    spec = preset_config.sweep.to_spec()
    lines = extract_line(spec, run_sweep(spec, system, medium, continuous, workers=1))
    assert all(line.found for line in lines)
    positions = [line.delta_p_max for line in lines]
    assert angular_to_mhz(max(positions) - min(positions)) < 0.1
    # the weak input already excites a few percent of superatoms at cell entry
    assert lines[0].t_max == pytest.approx(0.621, abs=0.01)


def test_feedback_ablation(system, medium, continuous):
    spec = _spec(-4, 4, 161, [1.0])
    rows = dict(line_scan(spec, system, medium, continuous, workers=1))
    coupled, pinned = rows[True], rows[False]
    assert coupled.found and pinned.found
    assert pinned.t_max < coupled.t_max
    assert pinned.fwhm > coupled.fwhm


def test_flat_spectrum_has_no_line(system, medium):
    spec = _spec(-3, 3, 7, [0.5])
    flat = [
        SpectrumPoint(intensity_index=0, detuning_index=j, omega_p_in=spec.omega_p_inputs[0],
                      delta_p=d, delta_2=d + system.delta_c, transmission=0.01)
        for j, d in enumerate(spec.delta_p_values)
    ]
    result = SpectrumResult(
        delta_p_values=spec.delta_p_values,
        delta_2_values=[d + system.delta_c for d in spec.delta_p_values],
        omega_p_inputs=spec.omega_p_inputs,
        background=[0.02] * 7,
        peak_window=system.omega_c,
        points=flat,
    )
    [line] = extract_line(spec, result)
    assert not line.found
    assert line.t_max is None
    assert line.reason == "no EIT line"

    with pytest.raises(LineExtractionError):
        _extract_series(result, 0)


@pytest.mark.slow
def test_gaussian_and_homogeneous_profiles_agree(system, preset_config, gaussian_config, continuous):
    spec = preset_config.sweep.to_spec()
    homogeneous = run_sweep(spec, system, preset_config.medium, continuous, workers=1)
    gaussian = run_sweep(spec, system, gaussian_config.medium, continuous, workers=1)
    for a, b in zip(homogeneous.points, gaussian.points):
        assert a.transmission == pytest.approx(b.transmission, abs=0.01)


@pytest.mark.slow
@pytest.mark.parametrize("volume_scale", [0.8, 1.2])
def test_superatom_volume_insensitivity(system, medium, continuous, volume_scale):
    spec = _spec(-4, 4, 161, [0.15, 0.5, 1.0])
    nominal = extract_line(spec, run_sweep(spec, system, medium, continuous, workers=1))
    scaled_config = continuous.model_copy(update={"volume_scale": volume_scale})
    scaled = extract_line(spec, run_sweep(spec, system, medium, scaled_config, workers=1))
    for a, b in zip(nominal, scaled):
        assert abs(a.t_max - b.t_max) < 0.03


def test_derived_quantities(system, medium):
    report = derived_quantities(system, medium, [mhz_to_angular(1.0)])
    assert report.r_sa == pytest.approx(6.6, abs=0.1)
    assert report.n_sa_mean == pytest.approx(14.7, abs=0.5)
    assert report.rho_sa * report.v_sa == pytest.approx(1.0)
    assert report.group_velocity_m_s == pytest.approx(5.9e3, abs=0.3e3)
    assert report.saturation_rabi_mhz == pytest.approx(1.18, abs=0.05)
    assert report.saturation_intensity == pytest.approx(mhz_to_angular(report.saturation_rabi_mhz) ** 2)
    assert report.eit_halfwidth == pytest.approx(system.omega_c ** 2 / system.gamma_e)
    assert report.antibunching_window_ns == pytest.approx(2.24, abs=0.05)
    assert report.antibunching_window_discrepancy
    [(omega_mhz, rho_phot)] = report.photon_density_at_inputs
    assert omega_mhz == pytest.approx(1.0)
    assert rho_phot == pytest.approx(1.2e-2 / 4 / 2.25 ** 2)


def test_group_velocity_scales_with_control_power(system, medium):
    base = derived_quantities(system, medium)
    doubled = derived_quantities(system.model_copy(update={"omega_c": 2 * system.omega_c}), medium)
    assert doubled.group_velocity_m_s == pytest.approx(4 * base.group_velocity_m_s)
    assert math.isclose(doubled.r_sa, base.r_sa / 4 ** (1 / 6))
