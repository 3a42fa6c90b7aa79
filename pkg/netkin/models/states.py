"""Per-edge cell-averaged unknowns of the models.

Every state stores one array `data` whose second-to-last axis holds the components and whose last axis
runs over the cells. The kinetic state has an extra leading velocity axis.
"""

from typing import ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from typing_extensions import Self

from netkin.models.params import ModelKind, VelocityGrid


class EdgeState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    components: ClassVar[tuple[str, ...]]
    # +1 for components that keep their sign under x -> -x, -1 for those that flip
    parity: ClassVar[tuple[int, ...]]
    ndim: ClassVar[int] = 2

    data: np.ndarray

    @field_validator("data", mode="before")
    @classmethod
    def _as_float_array(cls, value) -> np.ndarray:
        data = np.array(value, dtype=float)
        if data.ndim != cls.ndim or data.shape[-2] != len(cls.components):
            raise ValueError(f"{cls.__name__} expects {cls.ndim}-d data with {len(cls.components)} components")
        return data

    @property
    def cells(self) -> int:
        return self.data.shape[-1]

    def replace(self, data: np.ndarray) -> Self:
        return type(self)(data=data)

    def component(self, name: str) -> np.ndarray:
        return self.data[..., self.components.index(name), :]

    def density(self) -> np.ndarray:
        return self.component("rho")

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.data)))

    @classmethod
    def parity_array(cls) -> np.ndarray:
        return np.asarray(cls.parity, dtype=float)


class KineticEdgeState(EdgeState):
    """Even and odd parities `r`, `j` of the distribution, shape `(N_v, 2, cells)`."""

    components = ("r", "j")
    parity = (1, -1)
    ndim = 3

    @property
    def r(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def j(self) -> np.ndarray:
        return self.data[:, 1]

    @classmethod
    def from_parities(cls, r: np.ndarray, j: np.ndarray) -> "KineticEdgeState":
        return cls(data=np.stack([r, j], axis=1))

    def density(self) -> np.ndarray:
        return 2.0 / self.r.shape[0] * np.sum(self.r, axis=0)


class P1EdgeState(EdgeState):
    components = ("rho", "q")
    parity = (1, -1)

    @property
    def rho(self) -> np.ndarray:
        return self.data[0]

    @property
    def q(self) -> np.ndarray:
        return self.data[1]


class HalfMomentEdgeState(EdgeState):
    components = ("rho", "q", "rho_hat", "q_hat")
    parity = (1, -1, -1, 1)

    @property
    def rho(self) -> np.ndarray:
        return self.data[0]

    @property
    def q(self) -> np.ndarray:
        return self.data[1]

    @property
    def rho_hat(self) -> np.ndarray:
        return self.data[2]

    @property
    def q_hat(self) -> np.ndarray:
        return self.data[3]


class KSEdgeState(EdgeState):
    components = ("rho",)
    parity = (1,)

    @property
    def rho(self) -> np.ndarray:
        return self.data[0]


class ChemoEdgeState(EdgeState):
    components = ("m",)
    parity = (1,)

    @property
    def m(self) -> np.ndarray:
        return self.data[0]

    def density(self) -> np.ndarray:
        return self.m


STATE_TYPES: dict[ModelKind, type[EdgeState]] = {
    ModelKind.KINETIC: KineticEdgeState,
    ModelKind.P1: P1EdgeState,
    ModelKind.HALF_MOMENT: HalfMomentEdgeState,
    ModelKind.KELLER_SEGEL: KSEdgeState,
}


def init_from_density(rho0: np.ndarray, kind: ModelKind, vgrid: VelocityGrid | None = None) -> EdgeState:
    """Equilibrium state `f = rho0 / 2` of a cell density profile."""
    rho0 = np.asarray(rho0, dtype=float)
    if np.any(rho0 < 0):
        raise ValueError("initial density must be non-negative")
    zeros = np.zeros_like(rho0)

    if kind is ModelKind.KINETIC:
        if vgrid is None:
            raise ValueError("the kinetic model needs a velocity grid")
        r = np.broadcast_to(rho0 / 2, (vgrid.cells, rho0.size))
        return KineticEdgeState.from_parities(r, np.zeros_like(r))
    if kind is ModelKind.P1:
        return P1EdgeState(data=[rho0, zeros])
    if kind is ModelKind.HALF_MOMENT:
        return HalfMomentEdgeState(data=[rho0, zeros, zeros, rho0 / 2])
    return KSEdgeState(data=[rho0])
