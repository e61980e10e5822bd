from typing import Optional, Tuple
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ProfileKind(str, Enum):
    HOMOGENEOUS = "homogeneous"
    GAUSSIAN = "gaussian"


class MediumProfile(BaseModel):
    """Atomic density along the propagation axis, z in [0, length]."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ProfileKind = ProfileKind.HOMOGENEOUS
    length: float = Field(..., gt=0, description="Medium extent L, um")
    rho_peak: float = Field(..., gt=0, description="Peak (or uniform) density, um^-3")
    center: Optional[float] = Field(None, description="Gaussian center z0, um (default L/2)")
    sigma_rho: Optional[float] = Field(None, gt=0, description="Gaussian half-width, um")
    optical_depth: float = Field(..., gt=0, description="Resonant optical depth kappa L")

    @model_validator(mode="after")
    def validate_gaussian_fields(self):
        if self.kind == ProfileKind.GAUSSIAN and self.sigma_rho is None:
            raise ValueError("sigma_rho is required for a gaussian profile")
        return self

    @property
    def z0(self) -> float:
        return self.length / 2.0 if self.center is None else self.center


class SuperatomCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    z_start: float
    z_end: float
    n_sa: float = Field(..., ge=0, description="Mean atom number in the blockade volume")
    kappa_cell: float = Field(..., ge=0, description="Absorption coefficient at the midpoint, um^-1")

    @property
    def width(self) -> float:
        return self.z_end - self.z_start

    @property
    def z_mid(self) -> float:
        return 0.5 * (self.z_start + self.z_end)


class SuperatomGrid(BaseModel):
    """Coarse-grained chain of superatoms tiling [0, L]."""
    model_config = ConfigDict(frozen=True)

    medium: MediumProfile
    r_sa: float = Field(..., gt=0, description="Blockade radius used for the cells, um")
    cells: Tuple[SuperatomCell, ...]
    degenerate: bool = Field(False, description="L < 2 r_sa: one cell spans the medium")

    @property
    def length(self) -> float:
        return self.cells[-1].z_end
