from enum import Enum
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class ModelKind(str, Enum):
    KINETIC = "kinetic"
    P1 = "p1"
    HALF_MOMENT = "half_moment"
    KELLER_SEGEL = "keller_segel"

    @property
    def is_hyperbolic(self) -> bool:
        return self is not ModelKind.KELLER_SEGEL


# phi = alpha^2 / (divisor * lambda^2) by default, admissible range 0 <= phi <= 1 / (divisor * eps^2)
PHI_DIVISORS = {ModelKind.KINETIC: 1.0, ModelKind.P1: 3.0, ModelKind.HALF_MOMENT: 6.0}


class ModelParams(BaseModel):
    """Constants of the scaled chemotaxis models."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lambda_: float = Field(description="Turnaround rate (1/time)", alias="lambda", default=1.0, gt=0)
    alpha: float = Field(description="Chemotactic sensitivity", default=1.0, ge=0)
    D: float = Field(description="Chemoattractant diffusivity", default=1.0, gt=0)
    gamma_rho: float = Field(description="Chemoattractant production rate", default=1.0, ge=0)
    gamma_m: float = Field(description="Chemoattractant decay rate", default=0.1, ge=0)
    epsilon: float = Field(description="Diffusive scaling parameter", default=1.0, gt=0)
    phi: float | None = Field(
        description="Relaxation speed; the model-specific default alpha^2/(c lambda^2) when unset", default=None, gt=0
    )

    @model_validator(mode="after")
    def _check_turnaround(self) -> "ModelParams":
        if self.epsilon * self.alpha > self.lambda_ * (1 + 1e-12):
            raise ValueError(
                f"epsilon={self.epsilon} violates lambda >= epsilon * alpha (lambda={self.lambda_}, alpha={self.alpha})"
            )
        return self

    def default_phi(self, kind: ModelKind) -> float:
        return self.alpha**2 / (PHI_DIVISORS[kind] * self.lambda_**2)

    def max_phi(self, kind: ModelKind) -> float:
        return 1.0 / (PHI_DIVISORS[kind] * self.epsilon**2)

    def phi_for(self, kind: ModelKind) -> float:
        """Relaxation speed for a hyperbolic model, validated against its admissible range."""
        phi = self.default_phi(kind) if self.phi is None else self.phi
        upper = self.max_phi(kind)
        if phi > upper * (1 + 1e-12):
            raise ValueError(f"phi={phi} exceeds the admissible bound {upper} of the {kind.value} model")
        if phi <= 0:
            raise ValueError(f"alpha=0 leaves the {kind.value} model without a relaxation speed, set phi > 0")
        return phi


class VelocityGrid(BaseModel):
    """Midpoint rule on the positive half (0, 1) of the velocity space [-1, 1]."""

    model_config = ConfigDict(frozen=True)

    cells: int = Field(description="Number of velocity cells N_v", default=50, ge=1)

    @property
    def dv(self) -> float:
        return 1.0 / self.cells

    @cached_property
    def velocities(self) -> np.ndarray:
        return (np.arange(self.cells) + 0.5) / self.cells

    @property
    def max_velocity(self) -> float:
        return float(self.velocities[-1])

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """`∫_{-1}^{1}` of an even integrand sampled at the positive velocities (first axis)."""
        return 2.0 * self.dv * np.sum(values, axis=0)
