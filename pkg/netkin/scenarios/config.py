from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from netkin.base import CouplingSolveError, NetworkFormatError, UnknownNodeError
from netkin.coupling import CattaneoCouplingVariant, CouplingMatrix, KineticDerived, PRECONDITION_EPSILON
from netkin.graph import Network
from netkin.hyperbolic import DEFAULT_SAFETY
from netkin.models import ModelKind, ModelParams, VelocityGrid
from netkin.scenarios.networks import remesh, resolve_network


class BoundaryCondition(BaseModel):
    """Closure of a degree-1 node."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["neumann", "dirichlet"] = Field(description="Zero mass flux or prescribed inflow", default="neumann")
    density: float = Field(description="Inflow density of a Dirichlet node", default=0.0, ge=0)


class InitialSegment(BaseModel):
    """Constant initial density on `[start, end)` of one edge, in edge coordinates."""

    model_config = ConfigDict(frozen=True)

    edge: int = Field(description="Edge id", ge=0)
    density: float = Field(description="Density value", ge=0)
    start: float = Field(description="Left end of the segment", default=0.0, ge=0)
    end: float | None = Field(description="Right end of the segment, the edge end when unset", default=None)


class ScenarioConfig(BaseModel):
    """Everything a run needs; loadable from a JSON document."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(description="Scenario name used in logs and output files", default="custom")
    network: str = Field(description="Built-in network name or path of a network description file")
    models: list[ModelKind] = Field(description="Models to run", default=[ModelKind.KINETIC], min_length=1)
    params: ModelParams = Field(description="Model constants", default_factory=ModelParams)
    velocity_cells: int = Field(description="Velocity cells N_v of the kinetic model", default=50, ge=1)
    dx: float | None = Field(description="Cell size override for every edge", default=None, gt=0)
    t_end: float = Field(description="Final time T", gt=0)
    snapshots: int = Field(description="Number of evenly spaced output times after t=0", default=50, ge=1)
    boundaries: dict[int, BoundaryCondition] = Field(
        description="Closure per degree-1 node; missing nodes are zero-flux", default_factory=dict
    )
    coupling: dict[int, list[list[float]]] = Field(
        description="Coupling matrix per junction; missing junctions redistribute uniformly", default_factory=dict
    )
    cattaneo: CattaneoCouplingVariant = Field(description="Node conditions of the P1 model", default=KineticDerived())
    initial_density: list[InitialSegment] = Field(description="Initial cell density", default_factory=list)
    initial_chemoattractant: float = Field(description="Uniform initial chemoattractant", default=0.0, ge=0)
    cfl_safety: float = Field(description="Fraction of the stable time step used", default=DEFAULT_SAFETY, gt=0, le=1)
    precondition_epsilon: float = Field(
        description="Node systems are solved in limit form below this epsilon", default=PRECONDITION_EPSILON, ge=0
    )

    @field_validator("models")
    @classmethod
    def _unique_models(cls, models: list[ModelKind]) -> list[ModelKind]:
        if len(set(models)) != len(models):
            raise ValueError(f"models must be unique, got {[m.value for m in models]}")
        return models

    @model_validator(mode="after")
    def _check_relaxation_speed(self) -> "ScenarioConfig":
        for kind in self.models:
            if kind.is_hyperbolic:
                self.params.phi_for(kind)
        return self

    @model_validator(mode="after")
    def _check_segments(self) -> "ScenarioConfig":
        for segment in self.initial_density:
            if segment.end is not None and segment.end <= segment.start:
                raise ValueError(f"initial segment on edge {segment.edge} is empty: [{segment.start}, {segment.end})")
        return self

    @property
    def velocity_grid(self) -> VelocityGrid:
        return VelocityGrid(cells=self.velocity_cells)

    def override(self, **updates: Any) -> "ScenarioConfig":
        """A validated copy with some fields replaced; `epsilon` and the other constants go into `params`."""
        document = self.model_dump(mode="json", by_alias=True)
        params_fields = {field.alias or name for name, field in ModelParams.model_fields.items()}
        for key, value in updates.items():
            if value is None:
                continue
            if key in params_fields:
                document["params"][key] = value
            elif key in type(self).model_fields:
                document[key] = value
            else:
                raise ValueError(f"unknown scenario field {key!r}")
        return type(self).model_validate(document)

    def resolve_network(self) -> Network:
        """The network with the configured cell size, checked against the boundary and coupling data."""
        net = resolve_network(self.network)
        if self.dx is not None:
            net = remesh(net, self.dx)

        for node_id in self.boundaries:
            if net.degree(node_id) != 1:
                raise NetworkFormatError(f"boundary condition given for node {node_id} of degree {net.degree(node_id)}")
        for node_id, entries in self.coupling.items():
            if node_id not in net.incidences:
                raise UnknownNodeError(node_id)
            if len(entries) != net.degree(node_id):
                raise CouplingSolveError(
                    f"junction {node_id} has degree {net.degree(node_id)}, got a {len(entries)}x{len(entries)} matrix"
                )
        for segment in self.initial_density:
            net.edge(segment.edge)
        return net

    def coupling_matrix(self, node_id: int) -> CouplingMatrix | None:
        if node_id not in self.coupling:
            return None
        return CouplingMatrix(entries=self.coupling[node_id])

    def boundary(self, node_id: int) -> BoundaryCondition:
        return self.boundaries.get(node_id, BoundaryCondition())

    def initial_profile(self, net: Network) -> dict[int, np.ndarray]:
        """Cell densities per edge; later segments overwrite earlier ones."""
        profile = {edge.id: np.zeros(edge.cells) for edge in net.edges}
        for segment in self.initial_density:
            edge = net.edge(segment.edge)
            centers = (np.arange(edge.cells) + 0.5) * edge.dx
            end = edge.length if segment.end is None else segment.end
            profile[edge.id][(centers >= segment.start) & (centers < end)] = segment.density
        return profile
