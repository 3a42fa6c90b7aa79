"""Scenario presets for the three standard test problems."""

from typing import Callable

from netkin.models import ModelKind, ModelParams
from netkin.scenarios.config import BoundaryCondition, InitialSegment, ScenarioConfig
from netkin.scenarios.networks import large_network


ALL_MODELS = [ModelKind.KINETIC, ModelKind.P1, ModelKind.HALF_MOMENT, ModelKind.KELLER_SEGEL]
# open ends of the large network receive the kinetic inflow f(0, v) = 1/2 for v > 0
LARGE_NETWORK_INFLOW = 1.0


def preset_interval_riemann() -> ScenarioConfig:
    """Riemann problem on `[0, 2]`: density 1 on the left half, closed ends."""
    return ScenarioConfig(
        name="interval",
        network="interval",
        models=ALL_MODELS,
        params=ModelParams(),
        velocity_cells=50,
        dx=0.005,
        t_end=0.2,
        initial_density=[InitialSegment(edge=0, density=1.0, start=0.0, end=1.0)],
    )


def preset_tripod() -> ScenarioConfig:
    """A junction with three outgoing unit edges holding the constant densities 1, 2 and 3."""
    return ScenarioConfig(
        name="tripod",
        network="tripod",
        models=ALL_MODELS,
        params=ModelParams(),
        velocity_cells=50,
        dx=0.02,
        t_end=0.3,
        initial_density=[InitialSegment(edge=i, density=float(i + 1)) for i in range(3)],
    )


def preset_large_network(t_end: float = 30.0) -> ScenarioConfig:
    """Inflow at every open end of the large network; the inflow edges start filled."""
    net = large_network()
    open_ends = net.boundary_nodes
    inflow_edges = sorted(inc.edge for node in open_ends for inc in net.incidences[node])
    return ScenarioConfig(
        name="large",
        network="large",
        models=ALL_MODELS,
        params=ModelParams(),
        velocity_cells=20,
        t_end=t_end,
        boundaries={node: BoundaryCondition(kind="dirichlet", density=LARGE_NETWORK_INFLOW) for node in open_ends},
        initial_density=[InitialSegment(edge=edge, density=1.0) for edge in inflow_edges],
    )


PRESETS: dict[str, Callable[[], ScenarioConfig]] = {
    "interval": preset_interval_riemann,
    "tripod": preset_tripod,
    "large": preset_large_network,
}
