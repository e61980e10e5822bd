from typing import List, Optional
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class PropagationMode(str, Enum):
    STOCHASTIC = "stochastic"
    CONTINUOUS = "continuous"


class G2Population(str, Enum):
    """Rydberg population driving the continuous-mode g2 equation."""
    UNCONDITIONAL = "unconditional"
    CONDITIONAL = "conditional"


class PropagationConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: PropagationMode = PropagationMode.STOCHASTIC
    seed: int = Field(20100614, ge=0, lt=2 ** 64, description="Master PRNG seed (stochastic mode)")
    substeps: int = Field(4, ge=1, description="Sub-steps per superatom cell")
    g2_feedback: bool = Field(True, description="False pins g2 to 1 everywhere")
    g2_population: G2Population = G2Population.UNCONDITIONAL
    volume_scale: float = Field(1.0, gt=0, le=10, description="Multiplier on the superatom volume")


class FieldState(BaseModel):
    """Probe intensity (squared Rabi frequency, rad^2/s^2) and g2 at position z."""
    model_config = ConfigDict(frozen=True)

    i_p: float = Field(..., ge=0)
    g2: float = Field(1.0, ge=0)
    z: float = 0.0


class TraceRecord(BaseModel):
    index: int
    z_mid: float
    p_excited: float
    sampled: Optional[bool] = None
    alpha_real: float
    alpha_imag: float
    i_p: float
    g2: float


class PropagationTrace(BaseModel):
    records: List[TraceRecord] = Field(default_factory=list)


class RealizationSummary(BaseModel):
    """Mean and standard error of the exit observables over realizations."""
    transmission: float
    transmission_stderr: float
    g2_out: float
    g2_stderr: float
    i_p_out: float
    n_realizations: int
