from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.config import get_settings
from core.units import mhz_to_angular
from schemas.experiment import SweepSpec
from schemas.medium import MediumProfile
from schemas.propagation import PropagationConfig
from schemas.system import AtomicSystem


def _default_realizations() -> int:
    return get_settings().DEFAULT_REALIZATIONS


def _default_inputs() -> List[float]:
    return [mhz_to_angular(nu) for nu in (0.15, 0.5, 1.0)]


class SweepSection(BaseModel):
    """[sweep] section: detuning grid bounds plus input Rabi frequencies (rad/s)."""
    model_config = ConfigDict(extra="forbid")

    delta_p_min: float = Field(default_factory=lambda: mhz_to_angular(-15.0))
    delta_p_max: float = Field(default_factory=lambda: mhz_to_angular(15.0))
    delta_p_points: int = Field(201, ge=1)
    omega_p_inputs: List[float] = Field(default_factory=_default_inputs, min_length=1)
    n_realizations: int = Field(default_factory=_default_realizations, ge=1)
    g2_input: float = Field(1.0, ge=0)
    peak_window: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def validate_range(self):
        if self.delta_p_points > 1 and not self.delta_p_min < self.delta_p_max:
            raise ValueError("delta_p_min must be smaller than delta_p_max")
        return self

    def detunings(self) -> List[float]:
        if self.delta_p_points == 1:
            return [self.delta_p_min]
        return [float(d) for d in np.linspace(self.delta_p_min, self.delta_p_max, self.delta_p_points)]

    def to_spec(self) -> SweepSpec:
        return SweepSpec(
            delta_p_values=self.detunings(),
            omega_p_inputs=list(self.omega_p_inputs),
            n_realizations=self.n_realizations,
            g2_input=self.g2_input,
            peak_window=self.peak_window,
        )


class OutputSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    directory: str = Field(default_factory=lambda: get_settings().OUTPUT_DIRECTORY)
    json_report: bool = False


def _default_propagation() -> PropagationConfig:
    settings = get_settings()
    return PropagationConfig(seed=settings.DEFAULT_SEED, substeps=settings.DEFAULT_SUBSTEPS)


class RunConfig(BaseModel):
    """Everything one simulator run needs, in internal units."""
    model_config = ConfigDict(extra="forbid")

    system: AtomicSystem
    medium: MediumProfile
    sweep: SweepSection = Field(default_factory=SweepSection)
    propagation: PropagationConfig = Field(default_factory=_default_propagation)
    output: OutputSection = Field(default_factory=OutputSection)
