from functools import lru_cache
import logging
import math

from core.exceptions import SimulationError
from core.physics import blockade_radius
from schemas.medium import MediumProfile, ProfileKind, SuperatomCell, SuperatomGrid
from schemas.system import AtomicSystem

logger = logging.getLogger(__name__)

# Relative slack when deciding whether L is a whole number of cells
_TILING_TOLERANCE = 1e-9


def column_density(medium: MediumProfile) -> float:
    """Integral of rho(z) over [0, L], um^-2."""
    if medium.kind == ProfileKind.HOMOGENEOUS:
        return medium.rho_peak * medium.length
    s = medium.sigma_rho * math.sqrt(2.0)
    z0 = medium.z0
    return (
        medium.rho_peak * medium.sigma_rho * math.sqrt(math.pi / 2.0)
        * (math.erf((medium.length - z0) / s) + math.erf(z0 / s))
    )


@lru_cache(maxsize=64)
def kappa_scale(medium: MediumProfile) -> float:
    """Effective cross-section fixing the integrated kappa to the optical depth, um^2."""
    return medium.optical_depth / column_density(medium)


def mean_density(medium: MediumProfile) -> float:
    return column_density(medium) / medium.length


def density_at(medium: MediumProfile, z: float) -> float:
    """Atomic density rho(z), um^-3."""
    if z < 0 or z > medium.length:
        raise SimulationError(f"z = {z:.6g} um outside the medium [0, {medium.length:.6g}] um")
    if medium.kind == ProfileKind.HOMOGENEOUS:
        return medium.rho_peak
    return medium.rho_peak * math.exp(-((z - medium.z0) ** 2) / (2.0 * medium.sigma_rho ** 2))


def kappa_at(medium: MediumProfile, z: float) -> float:
    """Resonant intensity absorption coefficient kappa(z), um^-1."""
    return kappa_scale(medium) * density_at(medium, z)


def build_grid(medium: MediumProfile, system: AtomicSystem, volume_scale: float = 1.0) -> SuperatomGrid:
    """Divide [0, L] into superatom cells of width 2 R_sa.

    ``volume_scale`` multiplies the superatom volume (R_sa by its cube root).
    A trailing partial cell keeps its true width.
    """
    if volume_scale <= 0:
        raise SimulationError("volume_scale must be positive")
    r_sa = blockade_radius(system) * volume_scale ** (1.0 / 3.0)
    v_sa = 4.0 * math.pi / 3.0 * r_sa ** 3
    width = 2.0 * r_sa
    length = medium.length

    n_full = int(math.floor(length / width * (1.0 + _TILING_TOLERANCE)))
    edges = [k * width for k in range(n_full + 1)]
    degenerate = n_full == 0
    if degenerate:
        logger.warning(
            f"Medium length {length:.6g} um is shorter than one superatom ({width:.6g} um); using a single cell"
        )
        edges = [0.0, length]
    elif length - edges[-1] > _TILING_TOLERANCE * length:
        edges.append(length)
    else:
        edges[-1] = length

    cells = []
    for index, (z_start, z_end) in enumerate(zip(edges[:-1], edges[1:])):
        z_mid = 0.5 * (z_start + z_end)
        rho = density_at(medium, z_mid)
        cells.append(SuperatomCell(
            index=index,
            z_start=z_start,
            z_end=z_end,
            n_sa=rho * v_sa,
            kappa_cell=kappa_scale(medium) * rho,
        ))

    logger.debug(f"Built superatom grid: {len(cells)} cells, r_sa={r_sa:.4g} um, L={length:.6g} um")
    return SuperatomGrid(medium=medium, r_sa=r_sa, cells=tuple(cells), degenerate=degenerate)
