from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.physics import transverse_rates


class AtomicSystem(BaseModel):
    """Fixed physical constants of a run. All rates in rad/s."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma_e_pop: float = Field(..., gt=0, description="Population decay rate of |e>")
    gamma_r_pop: float = Field(..., ge=0, description="Population decay rate of |r>")
    linewidth_1ph: float = Field(0.0, ge=0, description="One-photon laser linewidth")
    linewidth_2ph: float = Field(0.0, ge=0, description="Two-photon laser linewidth")
    c6: float = Field(..., gt=0, description="Van der Waals coefficient, rad/s um^6 (repulsive)")
    omega_c: float = Field(..., gt=0, description="Control Rabi frequency")
    delta_c: float = Field(0.0, description="Control detuning")

    @model_validator(mode="after")
    def validate_transverse_rates(self):
        gamma_e, gamma_r = transverse_rates(self)
        if not gamma_r < gamma_e:
            raise ValueError(
                f"gamma_r ({gamma_r:.6g} rad/s) must be smaller than gamma_e ({gamma_e:.6g} rad/s)"
            )
        return self

    @property
    def gamma_e(self) -> float:
        return transverse_rates(self)[0]

    @property
    def gamma_r(self) -> float:
        return transverse_rates(self)[1]

    @property
    def omega_c_sq(self) -> float:
        return self.omega_c * self.omega_c

    @property
    def eit_halfwidth(self) -> float:
        """w = |Omega_c|^2 / gamma_e."""
        return self.omega_c_sq / self.gamma_e


class DetuningPoint(BaseModel):
    """Probe and two-photon detuning.

    Build it with `at` or `at_two_photon` so that delta_2 = delta_p + delta_c holds.
    The field constructor is internal to those factories.
    """
    model_config = ConfigDict(frozen=True)

    delta_p: float
    delta_2: float

    @classmethod
    def at(cls, system: AtomicSystem, delta_p: float) -> "DetuningPoint":
        return cls(delta_p=delta_p, delta_2=delta_p + system.delta_c)

    @classmethod
    def at_two_photon(cls, system: AtomicSystem, delta_2: float) -> "DetuningPoint":
        """Point with a given two-photon detuning (delta_p = delta_2 - delta_c)."""
        return cls.at(system, delta_2 - system.delta_c)
