from typing import List, Optional

from pydantic import BaseModel, Field, field_validator


class SweepSpec(BaseModel):
    """Probe detuning x input Rabi frequency grid. Frequencies in rad/s."""
    delta_p_values: List[float] = Field(..., min_length=1)
    omega_p_inputs: List[float] = Field(..., min_length=1)
    n_realizations: int = Field(10, ge=1)
    g2_input: float = Field(1.0, ge=0, description="Input correlation, 1 for coherent light")
    peak_window: Optional[float] = Field(None, gt=0, description="|delta_2| bound of the peak search (default omega_c)")

    @field_validator('delta_p_values')
    @classmethod
    def validate_increasing(cls, v):
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError('delta_p_values must be strictly increasing')
        return v

    @field_validator('omega_p_inputs')
    @classmethod
    def validate_positive_inputs(cls, v):
        if any(x <= 0 for x in v):
            raise ValueError('omega_p_inputs must be positive')
        return v


class SpectrumPoint(BaseModel):
    intensity_index: int
    detuning_index: int
    omega_p_in: float
    delta_p: float
    delta_2: float
    transmission: Optional[float] = Field(None, ge=0, le=1)
    transmission_stderr: Optional[float] = None
    g2_out: Optional[float] = Field(None, ge=0)
    g2_stderr: Optional[float] = None
    i_p_out: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class SpectrumResult(BaseModel):
    """Sweep outputs ordered by (intensity, detuning)."""
    delta_p_values: List[float]
    delta_2_values: List[float]
    omega_p_inputs: List[float]
    background: List[float] = Field(..., description="Two-level transmission exp(-OD Im a_TLA) per detuning")
    peak_window: float
    g2_feedback: bool = True
    points: List[SpectrumPoint]

    def series(self, intensity_index: int) -> List[SpectrumPoint]:
        n = len(self.delta_p_values)
        return self.points[intensity_index * n:(intensity_index + 1) * n]

    @property
    def failed(self) -> List[SpectrumPoint]:
        return [p for p in self.points if not p.ok]


class LineObservables(BaseModel):
    omega_p_in: float
    found: bool = Field(True, description="False when the spectrum shows no EIT line")
    t_max: Optional[float] = None
    fwhm: Optional[float] = Field(None, gt=0)
    delta_p_max: Optional[float] = None
    reason: Optional[str] = None


class DerivedReport(BaseModel):
    """Scalar scales of a run. Lengths um, densities um^-3, rates rad/s."""
    r_sa: float
    v_sa: float
    rho_sa: float
    rho_mean: float
    n_sa_mean: float
    kappa_mean: float
    eit_halfwidth: float
    group_velocity_m_s: float
    saturation_intensity: float
    saturation_rabi_mhz: float
    antibunching_window_ns: float
    quoted_antibunching_window_ns: float = 1.6
    antibunching_window_discrepancy: bool
    photon_density_at_inputs: List[List[float]] = Field(
        default_factory=list, description="[omega_p_in_MHz, rho_phot um^-3] per sweep input"
    )
