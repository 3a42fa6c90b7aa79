import itertools
from typing import Mapping

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from netkin.base import typechecked


DensityField = Mapping[int, np.ndarray] | np.ndarray
CellSizes = Mapping[int, float] | float


def _as_fields(field: DensityField, dx: CellSizes) -> tuple[dict[int, np.ndarray], dict[int, float]]:
    if isinstance(field, np.ndarray):
        field = {0: field}
    if not isinstance(dx, Mapping):
        dx = {edge: float(dx) for edge in field}
    return {edge: np.asarray(values, dtype=float) for edge, values in field.items()}, dict(dx)


@typechecked
def total_mass(densities: DensityField, dx: CellSizes) -> float:
    """`sum_edges sum_cells rho dx`."""
    densities, dx = _as_fields(densities, dx)
    return float(sum(np.sum(values) * dx[edge] for edge, values in densities.items()))


@typechecked
def l1_distance(a: DensityField, b: DensityField, dx: CellSizes) -> float:
    """`sum_edges sum_cells |a - b| dx` of two fields on the same grid."""
    a, dx = _as_fields(a, dx)
    b, _ = _as_fields(b, dx)
    if a.keys() != b.keys() or any(a[edge].shape != b[edge].shape for edge in a):
        raise ValueError("l1_distance needs two fields on the same grid")
    return float(sum(np.sum(np.abs(a[edge] - b[edge])) * dx[edge] for edge in a))


class Snapshot(BaseModel):
    """Cell values per edge at one output time; field names are the output columns."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    time: float
    fields: dict[int, dict[str, np.ndarray]]

    def density(self) -> dict[int, np.ndarray]:
        return {edge: values["rho"] for edge, values in self.fields.items()}


class ModelRun(BaseModel):
    """Output of one model on one scenario."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: str = Field(description="Model name, with the coupling variant where it matters")
    model: str
    dt: float = Field(description="Global time step; the last step before an output time may be shorter")
    steps: int
    wall_time: float = Field(description="Seconds spent in the time loop")
    snapshots: list[Snapshot]
    total_mass: list[float]
    min_distribution: float | None = Field(
        description="Smallest value of f(v), f(-v) over all cells, velocities and steps (kinetic model only)",
        default=None,
    )

    @model_validator(mode="after")
    def _check_series(self) -> "ModelRun":
        times = self.times
        if len(self.total_mass) != len(times):
            raise ValueError(f"{len(self.total_mass)} mass values for {len(times)} snapshots")
        if np.any(np.diff(times) <= 0):
            raise ValueError("snapshot times must be strictly increasing")
        return self

    @property
    def times(self) -> np.ndarray:
        return np.array([snapshot.time for snapshot in self.snapshots])

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    @property
    def mass_drift(self) -> float:
        """Largest deviation of the total mass from its initial value."""
        return float(np.max(np.abs(np.asarray(self.total_mass) - self.total_mass[0])))


class RunDiagnostics(BaseModel):
    """All model runs of one scenario on a common grid."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scenario: str
    dx: dict[int, float]
    centers: dict[int, np.ndarray]
    runs: dict[str, ModelRun]

    def merged(self, other: "RunDiagnostics") -> "RunDiagnostics":
        if other.dx != self.dx:
            raise ValueError("cannot merge runs on different grids")
        if clash := self.runs.keys() & other.runs.keys():
            raise ValueError(f"duplicate run labels: {sorted(clash)}")
        return self.model_copy(update={"runs": {**self.runs, **other.runs}})

    def final_masses(self) -> dict[str, float]:
        return {label: run.total_mass[-1] for label, run in self.runs.items()}

    def mass_ordering(self) -> list[tuple[str, float]]:
        """Final total masses, largest first."""
        return sorted(self.final_masses().items(), key=lambda item: item[1], reverse=True)

    def pairwise_l1(self) -> dict[tuple[str, str], float]:
        """L1 distances between the final densities of every pair of runs."""
        return {
            (a, b): l1_distance(self.runs[a].final.density(), self.runs[b].final.density(), self.dx)
            for a, b in itertools.combinations(self.runs, 2)
        }
