"""Per-model pieces of the network time step: node closures, transport, relaxation and output fields.

The simulation loop is model independent; everything that differs between the kinetic model, the two
moment models and the Keller-Segel model lives behind `ModelDynamics`.
"""

from abc import ABC, abstractmethod
from typing import ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict

from netkin.base import typechecked
from netkin.coupling import (
    CattaneoVariant,
    CouplingMatrix,
    cattaneo_inflow_conditions,
    half_moment_inflow_conditions,
    kinetic_inflow_state,
    solve_characteristic_node,
    solve_node_cattaneo,
    solve_node_halfmoment,
    solve_node_keller_segel,
    solve_node_kinetic,
)
from netkin.graph import NodeLocalFrame
from netkin.hyperbolic import LinearHyperbolicSystem
from netkin.models import (
    STATE_TYPES,
    EdgeState,
    HalfMomentEdgeState,
    KineticEdgeState,
    KSEdgeState,
    ModelKind,
    ModelParams,
    P1EdgeState,
    VelocityGrid,
    distribution_halves,
    hm_relax,
    hm_transport,
    init_from_density,
    keller_segel_step,
    kinetic_relax,
    kinetic_transport,
    moments_kinetic,
    p1_relax,
    p1_transport,
    transport_system,
)


Ghosts = tuple[np.ndarray | None, np.ndarray | None]


class NodeClosure(BaseModel):
    """How a node closes the edges around it: a coupling matrix, or a prescribed inflow density."""

    model_config = ConfigDict(frozen=True)

    frame: NodeLocalFrame
    coupling: CouplingMatrix | None = None
    inflow: float | None = None

    @property
    def is_junction(self) -> bool:
        return self.frame.degree >= 2


class ModelDynamics(ABC):
    kind: ClassVar[ModelKind]

    def __init__(self, params: ModelParams, vgrid: VelocityGrid, precondition_below: float) -> None:
        self.params = params
        self.vgrid = vgrid
        self.precondition_below = precondition_below

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(epsilon={self.params.epsilon})"

    @property
    def label(self) -> str:
        return self.kind.value

    @property
    def state_type(self) -> type[EdgeState]:
        return STATE_TYPES[self.kind]

    @property
    def parity(self) -> np.ndarray:
        return self.state_type.parity_array()

    def initial_state(self, rho0: np.ndarray) -> EdgeState:
        return init_from_density(rho0, self.kind, self.vgrid)

    def transport_system(self) -> LinearHyperbolicSystem | None:
        """Transport matrix bounding the advective time step, `None` for parabolic models."""
        return None

    def parabolic_coefficients(self) -> list[float]:
        return []

    @abstractmethod
    def fields(self, state: EdgeState) -> dict[str, np.ndarray]:
        """Output columns per cell, `rho` first."""

    def min_distribution(self, state: EdgeState) -> float | None:
        return None


class HyperbolicDynamics(ModelDynamics):
    @property
    def phi(self) -> float:
        return self.params.phi_for(self.kind)

    def transport_system(self) -> LinearHyperbolicSystem:
        return transport_system(self.kind, self.phi)

    @abstractmethod
    def node_states(self, closure: NodeClosure, traces: np.ndarray) -> np.ndarray:
        """Node states in the all-outgoing frame from the local-frame traces of the adjacent cells."""

    @abstractmethod
    def transport(self, state: EdgeState, dt: float, dx: float, ghosts: Ghosts) -> EdgeState:
        """Upwind step with the node states as ghost values."""

    @abstractmethod
    def relax(self, state: EdgeState, mbar: np.ndarray, dt: float, dx: float, ghosts: Ghosts) -> EdgeState:
        """Implicit step of the relaxation sources."""


@typechecked
class KineticDynamics(HyperbolicDynamics):
    kind = ModelKind.KINETIC

    def transport_system(self) -> LinearHyperbolicSystem:
        return super().transport_system().scaled(self.vgrid.max_velocity)

    def node_states(self, closure: NodeClosure, traces: np.ndarray) -> np.ndarray:
        eps = self.params.epsilon
        if closure.inflow is not None:
            return kinetic_inflow_state(traces[0], closure.inflow, eps, self.phi)[None]
        return solve_node_kinetic(
            closure.frame, traces, closure.coupling, eps, self.phi, self.vgrid, self.precondition_below
        )

    def transport(self, state: KineticEdgeState, dt: float, dx: float, ghosts: Ghosts) -> KineticEdgeState:
        return kinetic_transport(state, self.vgrid, self.phi, dt, dx, ghosts)

    def relax(
        self, state: KineticEdgeState, mbar: np.ndarray, dt: float, dx: float, ghosts: Ghosts
    ) -> KineticEdgeState:
        return kinetic_relax(state, mbar, self.params, self.vgrid, dt, dx, ghosts)

    def fields(self, state: KineticEdgeState) -> dict[str, np.ndarray]:
        rho, q = moments_kinetic(state, self.vgrid)
        return {"rho": rho, "q": q}

    def min_distribution(self, state: KineticEdgeState) -> float:
        f_plus, f_minus = distribution_halves(state.r, state.j, self.params.epsilon)
        return float(min(f_plus.min(), f_minus.min()))


@typechecked
class CattaneoDynamics(HyperbolicDynamics):
    kind = ModelKind.P1

    def __init__(
        self, params: ModelParams, vgrid: VelocityGrid, precondition_below: float, variant: CattaneoVariant
    ) -> None:
        super().__init__(params, vgrid, precondition_below)
        self.variant = variant

    @property
    def label(self) -> str:
        return run_label(self.kind, self.variant)

    def node_states(self, closure: NodeClosure, traces: np.ndarray) -> np.ndarray:
        eps = self.params.epsilon
        if closure.inflow is not None:
            conditions = cattaneo_inflow_conditions(closure.inflow)
            return solve_characteristic_node(
                self.transport_system(), traces, conditions, eps, self.precondition_below
            )
        return solve_node_cattaneo(
            closure.frame, traces, self.variant, closure.coupling, eps, self.phi, self.precondition_below
        )

    def transport(self, state: P1EdgeState, dt: float, dx: float, ghosts: Ghosts) -> P1EdgeState:
        return p1_transport(state, self.phi, dt, dx, ghosts)

    def relax(self, state: P1EdgeState, mbar: np.ndarray, dt: float, dx: float, ghosts: Ghosts) -> P1EdgeState:
        return p1_relax(state, mbar, self.params, dt, dx, ghosts)

    def fields(self, state: P1EdgeState) -> dict[str, np.ndarray]:
        return {"rho": state.rho, "q": state.q}


@typechecked
class HalfMomentDynamics(HyperbolicDynamics):
    kind = ModelKind.HALF_MOMENT

    def node_states(self, closure: NodeClosure, traces: np.ndarray) -> np.ndarray:
        eps = self.params.epsilon
        if closure.inflow is not None:
            conditions = half_moment_inflow_conditions(closure.inflow)
            return solve_characteristic_node(
                self.transport_system(), traces, conditions, eps, self.precondition_below
            )
        return solve_node_halfmoment(closure.frame, traces, closure.coupling, eps, self.phi, self.precondition_below)

    def transport(self, state: HalfMomentEdgeState, dt: float, dx: float, ghosts: Ghosts) -> HalfMomentEdgeState:
        return hm_transport(state, self.phi, dt, dx, ghosts)

    def relax(
        self, state: HalfMomentEdgeState, mbar: np.ndarray, dt: float, dx: float, ghosts: Ghosts
    ) -> HalfMomentEdgeState:
        return hm_relax(state, mbar, self.params, dt, dx, ghosts)

    def fields(self, state: HalfMomentEdgeState) -> dict[str, np.ndarray]:
        return {"rho": state.rho, "q": state.q, "rho_hat": state.rho_hat, "q_hat": state.q_hat}


@typechecked
class KellerSegelDynamics(ModelDynamics):
    kind = ModelKind.KELLER_SEGEL

    def parabolic_coefficients(self) -> list[float]:
        return [1.0 / (3 * self.params.lambda_)]

    def node_fluxes(
        self, closure: NodeClosure, densities: np.ndarray, mbar: np.ndarray, dx: np.ndarray
    ) -> np.ndarray:
        """Mass fluxes into the adjacent edges, in the all-outgoing frame."""
        if closure.inflow is None and not closure.is_junction:
            return np.zeros(1)
        _, fluxes = solve_node_keller_segel(
            closure.frame, densities, mbar, dx, self.params.lambda_, self.params.alpha, closure.inflow
        )
        return fluxes

    def step(
        self, state: KSEdgeState, mbar: np.ndarray, dt: float, dx: float, boundary_fluxes: tuple[float, float]
    ) -> KSEdgeState:
        return keller_segel_step(state, mbar, self.params, dt, dx, boundary_fluxes)

    def fields(self, state: KSEdgeState) -> dict[str, np.ndarray]:
        return {"rho": state.rho}


def run_label(kind: ModelKind, variant: CattaneoVariant) -> str:
    """Name of a model run; P1 runs carry their coupling variant."""
    if kind is ModelKind.P1:
        return f"{kind.value}[{variant.kind}]"
    return kind.value


def build_dynamics(
    kind: ModelKind,
    params: ModelParams,
    vgrid: VelocityGrid,
    variant: CattaneoVariant,
    precondition_below: float,
) -> ModelDynamics:
    if kind is ModelKind.KINETIC:
        return KineticDynamics(params, vgrid, precondition_below)
    if kind is ModelKind.P1:
        return CattaneoDynamics(params, vgrid, precondition_below, variant)
    if kind is ModelKind.HALF_MOMENT:
        return HalfMomentDynamics(params, vgrid, precondition_below)
    return KellerSegelDynamics(params, vgrid, precondition_below)
