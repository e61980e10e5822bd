import math

import pytest
from scipy.integrate import quad

from core.exceptions import SimulationError
from core.physics import blockade_radius
from crud.medium import build_grid, column_density, density_at, kappa_at
from schemas.medium import MediumProfile, ProfileKind


@pytest.fixture
def wide_gaussian():
    return MediumProfile(
        kind=ProfileKind.GAUSSIAN, length=3000.0, rho_peak=1.32e-2,
        center=1500.0, sigma_rho=700.0, optical_depth=4.524,
    )


def test_homogeneous_density(medium):
    for z in (0.0, 13.0, 650.0, 1300.0):
        assert density_at(medium, z) * 1e9 == pytest.approx(1.2e7)


def test_gaussian_density(wide_gaussian):
    assert density_at(wide_gaussian, 1500.0) * 1e9 == pytest.approx(1.32e7)
    assert density_at(wide_gaussian, 2200.0) == pytest.approx(1.32e-2 * math.exp(-0.5))


def test_gaussian_center_defaults_to_middle():
    profile = MediumProfile(kind="gaussian", length=1300.0, rho_peak=1e-2, sigma_rho=700.0, optical_depth=1.0)
    assert profile.z0 == 650.0


def test_gaussian_requires_width():
    with pytest.raises(ValueError):
        MediumProfile(kind="gaussian", length=1300.0, rho_peak=1e-2, optical_depth=1.0)


def test_density_outside_medium_rejected(medium):
    with pytest.raises(SimulationError):
        density_at(medium, -1.0)
    with pytest.raises(SimulationError):
        density_at(medium, 1300.5)


def test_homogeneous_kappa(medium):
    assert kappa_at(medium, 400.0) == pytest.approx(3.48e-3, rel=1e-3)


@pytest.mark.parametrize("fixture_name", ["medium", "wide_gaussian"])
def test_kappa_integrates_to_optical_depth(request, fixture_name):
    profile = request.getfixturevalue(fixture_name)
    integral, _ = quad(lambda z: kappa_at(profile, z), 0.0, profile.length, epsabs=0, epsrel=1e-12, limit=200)
    assert integral == pytest.approx(profile.optical_depth, rel=1e-9)


def test_kappa_linear_in_optical_depth(gaussian_config):
    profile = gaussian_config.medium
    doubled = profile.model_copy(update={"optical_depth": 2 * profile.optical_depth})
    for z in (0.0, 300.0, 650.0, 1299.0):
        assert kappa_at(doubled, z) == pytest.approx(2 * kappa_at(profile, z))


def test_column_density_gaussian_matches_quadrature(gaussian_config):
    profile = gaussian_config.medium
    integral, _ = quad(lambda z: density_at(profile, z), 0.0, profile.length)
    assert column_density(profile) == pytest.approx(integral, rel=1e-10)


def test_rb87_grid_layout(grid, system, medium):
    r_sa = blockade_radius(system)
    # R_sa = 6.633 um, so 1300 um holds 97 whole cells plus a remainder
    assert len(grid.cells) == math.floor(medium.length / (2 * r_sa)) + 1 == 98
    assert not grid.degenerate
    for cell in grid.cells[:-1]:
        assert cell.width == pytest.approx(2 * r_sa)
    assert 0 < grid.cells[-1].width < 2 * r_sa


def test_grid_tiles_medium(grid, gaussian_config, system):
    gaussian_grid = build_grid(gaussian_config.medium, system)
    for g in (grid, gaussian_grid):
        assert g.cells[0].z_start == 0.0
        assert g.cells[-1].z_end == g.medium.length
        for left, right in zip(g.cells, g.cells[1:]):
            assert left.z_end == right.z_start
            assert right.index == left.index + 1


def test_homogeneous_cells_hold_rb87_atom_number(grid):
    for cell in grid.cells:
        assert cell.n_sa == pytest.approx(14.7, abs=0.5)


def test_cell_optical_depth_sums(grid, gaussian_config, system):
    homogeneous_sum = sum(c.kappa_cell * c.width for c in grid.cells)
    assert homogeneous_sum == pytest.approx(grid.medium.optical_depth, rel=1e-12)

    gaussian_grid = build_grid(gaussian_config.medium, system)
    gaussian_sum = sum(c.kappa_cell * c.width for c in gaussian_grid.cells)
    assert gaussian_sum == pytest.approx(gaussian_config.medium.optical_depth, rel=0.02)


def test_single_cell_when_length_is_blockade_diameter(system, medium):
    exact = medium.model_copy(update={"length": 2 * blockade_radius(system)})
    g = build_grid(exact, system)
    assert len(g.cells) == 1
    assert not g.degenerate
    assert g.cells[0].width == pytest.approx(2 * blockade_radius(system))


def test_short_medium_is_degenerate(system, medium):
    short = medium.model_copy(update={"length": 5.0})
    g = build_grid(short, system)
    assert g.degenerate
    assert len(g.cells) == 1
    assert (g.cells[0].z_start, g.cells[0].z_end) == (0.0, 5.0)


def test_grid_is_deterministic(system, medium):
    assert build_grid(medium, system) == build_grid(medium, system)


def test_volume_scale_rescales_cells(system, medium):
    g = build_grid(medium, system, volume_scale=1.2)
    assert g.r_sa == pytest.approx(blockade_radius(system) * 1.2 ** (1 / 3))
    assert g.cells[0].n_sa == pytest.approx(1.2 * build_grid(medium, system).cells[0].n_sa)
