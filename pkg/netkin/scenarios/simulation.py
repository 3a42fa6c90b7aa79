"""Operator-split time stepping of the chemotaxis models on a network.

One step of size `dt` runs, in this order:

1. node values `m*` of the chemoattractant and an explicit step of `m` on every edge,
2. the flux-limited gradient `mbar` of the new `m` (with recomputed node values),
3. node solves on the traces of the cell model,
4. upwind transport with the node states as ghost values,
5. the implicit relaxation step, whose gradients see the coupling-weighted neighbour cells at junctions.

The Keller-Segel model replaces 3-5 by a node flux balance and one explicit conservative step.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext

import numpy as np
from loguru import logger

from netkin.base import SimulationAborted, map_ordered, worker_count
from netkin.coupling import CouplingMatrix, kinetic_coupling_matrix, solve_node_chemo
from netkin.graph import Network, node_local_frame
from netkin.hyperbolic import EdgeGrid, cfl_dt
from netkin.models import ChemoEdgeState, EdgeState, ModelKind, chemo_step, flux_limited_gradient
from netkin.scenarios.config import ScenarioConfig
from netkin.scenarios.diagnostics import ModelRun, RunDiagnostics, Snapshot, total_mass
from netkin.scenarios.dynamics import HyperbolicDynamics, KellerSegelDynamics, NodeClosure, build_dynamics


TIME_TOLERANCE = 1e-12


def _side(sign: int) -> int:
    """Index of the edge end at a node: 0 for the start (outgoing edge), 1 for the end."""
    return 0 if sign > 0 else 1


class NetworkSimulation:
    """State and time loop of one model on one scenario."""

    def __init__(
        self,
        config: ScenarioConfig,
        kind: ModelKind,
        net: Network | None = None,
        executor: ThreadPoolExecutor | None = None,
    ) -> None:
        self.config = config
        self.net = config.resolve_network() if net is None else net
        self.executor = executor
        self.params = config.params
        self.dynamics = build_dynamics(
            kind, config.params, config.velocity_grid, config.cattaneo, config.precondition_epsilon
        )

        self.edges = self.net.edge_ids
        self.dx = {edge.id: edge.dx for edge in self.net.edges}
        self.closures = [self._closure(node) for node in self.net.node_ids]

        profile = config.initial_profile(self.net)
        self.states: dict[int, EdgeState] = {e: self.dynamics.initial_state(profile[e]) for e in self.edges}
        self.chemo = {
            edge.id: ChemoEdgeState(data=np.full((1, edge.cells), config.initial_chemoattractant))
            for edge in self.net.edges
        }
        self.time = 0.0
        self.steps = 0
        self.dt = self.stable_dt()
        self.min_distribution = self._min_distribution()

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(scenario={self.config.name!r}, model={self.dynamics.label!r})"

    @property
    def label(self) -> str:
        return self.dynamics.label

    def _closure(self, node: int) -> NodeClosure:
        frame = node_local_frame(self.net, node)
        if frame.degree >= 2:
            coupling = self.config.coupling_matrix(node) or kinetic_coupling_matrix(frame.degree)
            return NodeClosure(frame=frame, coupling=coupling)
        boundary = self.config.boundary(node)
        if boundary.kind == "dirichlet":
            return NodeClosure(frame=frame, inflow=boundary.density)
        return NodeClosure(frame=frame, coupling=CouplingMatrix.reflecting())

    def stable_dt(self) -> float:
        """Global time step from the advective CFL bound and the explicit diffusion bounds.

        None of the bounds depends on epsilon, the relaxation is implicit.
        """
        grids = [EdgeGrid(cells=edge.cells, length=edge.length) for edge in self.net.edges]
        system = self.dynamics.transport_system()
        systems = [system] * len(grids) if system is not None else []
        diffusivities = [self.params.D, *self.dynamics.parabolic_coefficients()]
        dt = cfl_dt(systems, grids, diffusivities, self.config.cfl_safety)
        logger.debug(f"{self.label}: dt={dt:.6g}, min dx={min(self.dx.values()):.6g}, diffusivities {diffusivities}")
        return dt

    # =========================================================================
    # Node values
    # =========================================================================

    def _adjacent(self, values: dict[int, np.ndarray], closure: NodeClosure) -> list[np.ndarray]:
        """Per incident edge, the values of the cell next to the node."""
        frame = closure.frame
        return [values[e][..., 0] if sign > 0 else values[e][..., -1] for e, sign in zip(frame.edges, frame.signs)]

    def _cell_sizes(self, closure: NodeClosure) -> np.ndarray:
        return np.array([self.dx[e] for e in closure.frame.edges])

    def _chemo_node_values(self) -> dict[int, list[float | None]]:
        """`m*` at both ends of every edge; `None` at degree-1 nodes, which are closed for `m`."""
        values: dict[int, list[float | None]] = {e: [None, None] for e in self.edges}
        m = {e: state.m for e, state in self.chemo.items()}
        for closure in self.closures:
            if not closure.is_junction:
                continue
            m_star, _ = solve_node_chemo(
                closure.frame, np.array(self._adjacent(m, closure)), self.params.D, self._cell_sizes(closure)
            )
            for e, sign in zip(closure.frame.edges, closure.frame.signs):
                values[e][_side(sign)] = m_star
        return values

    def _node_ghosts(self, states: dict[int, EdgeState]) -> dict[int, list[np.ndarray]]:
        """Node states of the cell model in edge coordinates, as ghost values of both edge ends."""
        parity = self.dynamics.parity
        data = {e: state.data for e, state in states.items()}

        def solve(closure: NodeClosure) -> np.ndarray:
            local = closure.frame.to_local(np.stack(self._adjacent(data, closure)), parity)
            return closure.frame.from_local(self.dynamics.node_states(closure, local), parity)

        ghosts: dict[int, list[np.ndarray]] = {e: [None, None] for e in self.edges}
        for closure, node_states in zip(self.closures, map_ordered(solve, self.closures, self.executor)):
            for k, (e, sign) in enumerate(zip(closure.frame.edges, closure.frame.signs)):
                ghosts[e][_side(sign)] = node_states[k]
        return ghosts

    def _relaxation_ghosts(self, states: dict[int, EdgeState]) -> dict[int, list[np.ndarray | None]]:
        """Neighbour cells for the relaxation gradients: `sum_l a_il P u_l` at junctions, none at ends."""
        parity = self.dynamics.parity
        data = {e: state.data for e, state in states.items()}
        ghosts: dict[int, list[np.ndarray | None]] = {e: [None, None] for e in self.edges}
        for closure in self.closures:
            if not closure.is_junction:
                continue
            frame = closure.frame
            local = frame.to_local(np.stack(self._adjacent(data, closure)), parity)
            mixed = frame.from_local(np.tensordot(closure.coupling.entries, local, axes=1) * parity, parity)
            for k, (e, sign) in enumerate(zip(frame.edges, frame.signs)):
                ghosts[e][_side(sign)] = mixed[k]
        return ghosts

    def _keller_segel_fluxes(self, chemo_values: dict[int, list[float | None]]) -> dict[int, list[float]]:
        """Mass fluxes through both end faces of every edge, positive along the edge."""
        rho = {e: state.density() for e, state in self.states.items()}
        m = {e: state.m for e, state in self.chemo.items()}
        fluxes = {e: [0.0, 0.0] for e in self.edges}
        for closure in self.closures:
            frame = closure.frame
            dx = self._cell_sizes(closure)
            if closure.is_junction:
                m_star = chemo_values[frame.edges[0]][_side(frame.signs[0])]
                gradient = (np.array(self._adjacent(m, closure)) - m_star) / (dx / 2)
                mbar = gradient / np.sqrt(1 + gradient**2)
            else:
                mbar = np.zeros(frame.degree)
            local = self.dynamics.node_fluxes(closure, np.array(self._adjacent(rho, closure)), mbar, dx)
            for e, sign, q in zip(frame.edges, frame.signs, local):
                fluxes[e][_side(sign)] = float(sign * q)
        return fluxes

    # =========================================================================
    # Time stepping
    # =========================================================================

    def _map_edges(self, fn) -> dict[int, EdgeState]:
        return dict(zip(self.edges, map_ordered(fn, self.edges, self.executor)))

    def step(self, dt: float) -> None:
        dynamics = self.dynamics
        rho = {e: state.density() for e, state in self.states.items()}

        chemo_values = self._chemo_node_values()
        self.chemo = self._map_edges(
            lambda e: chemo_step(self.chemo[e], rho[e], self.params, dt, self.dx[e], tuple(chemo_values[e]))
        )
        chemo_values = self._chemo_node_values()
        mbar = {e: flux_limited_gradient(self.chemo[e], self.dx[e], tuple(chemo_values[e])) for e in self.edges}

        if isinstance(dynamics, HyperbolicDynamics):
            ghosts = self._node_ghosts(self.states)
            transported = self._map_edges(
                lambda e: dynamics.transport(self.states[e], dt, self.dx[e], tuple(ghosts[e]))
            )
            relax_ghosts = self._relaxation_ghosts(transported)
            self.states = self._map_edges(
                lambda e: dynamics.relax(transported[e], mbar[e], dt, self.dx[e], tuple(relax_ghosts[e]))
            )
        elif isinstance(dynamics, KellerSegelDynamics):
            fluxes = self._keller_segel_fluxes(chemo_values)
            self.states = self._map_edges(
                lambda e: dynamics.step(self.states[e], mbar[e], dt, self.dx[e], tuple(fluxes[e]))
            )

        self.steps += 1
        self.time += dt
        self._check_finite()
        if self.min_distribution is not None:
            self.min_distribution = min(self.min_distribution, self._min_distribution())

    def _check_finite(self) -> None:
        for e in self.edges:
            if not (self.states[e].is_finite() and self.chemo[e].is_finite()):
                raise SimulationAborted(
                    f"non-finite values on edge {e} after step {self.steps} (t={self.time:.6g})",
                    step=self.steps,
                    time=self.time,
                    model=self.label,
                    edge=e,
                )

    def _min_distribution(self) -> float | None:
        values = [self.dynamics.min_distribution(state) for state in self.states.values()]
        return None if None in values else min(values)

    def density(self) -> dict[int, np.ndarray]:
        return {e: state.density() for e, state in self.states.items()}

    def total_mass(self) -> float:
        return total_mass(self.density(), self.dx)

    def snapshot(self) -> Snapshot:
        fields = {e: {**self.dynamics.fields(self.states[e]), "m": self.chemo[e].m} for e in self.edges}
        return Snapshot(time=self.time, fields=fields)

    def run(self) -> ModelRun:
        config = self.config
        snapshots = [self.snapshot()]
        masses = [self.total_mass()]
        start = time.perf_counter()

        with logger.contextualize(model=self.label):
            logger.info(
                f"Running {self.label} on {config.name!r} up to T={config.t_end:g}: "
                f"{len(self.net.edges)} edges, dt={self.dt:.6g}, eps={self.params.epsilon:g}"
            )
            for k in range(1, config.snapshots + 1):
                target = config.t_end * k / config.snapshots
                while target - self.time > TIME_TOLERANCE * config.t_end:
                    self.step(min(self.dt, target - self.time))
                self.time = target
                snapshots.append(self.snapshot())
                masses.append(self.total_mass())
                logger.info(f"Snapshot {k}/{config.snapshots} at t={target:.6g}, total mass {masses[-1]:.12g}")

            wall_time = time.perf_counter() - start
            logger.info(f"Finished {self.label} after {self.steps} steps in {wall_time:.2f}s, mass {masses[-1]:.12g}")

        return ModelRun(
            label=self.label,
            model=self.dynamics.kind.value,
            dt=self.dt,
            steps=self.steps,
            wall_time=wall_time,
            snapshots=snapshots,
            total_mass=masses,
            min_distribution=self.min_distribution,
        )


def run(config: ScenarioConfig) -> RunDiagnostics:
    """Run every configured model on the scenario."""
    net = config.resolve_network()
    workers = worker_count()
    runs: dict[str, ModelRun] = {}

    with logger.contextualize(run=config.name):
        with ThreadPoolExecutor(max_workers=workers) if workers > 1 else nullcontext() as executor:
            for kind in config.models:
                result = NetworkSimulation(config, kind, net=net, executor=executor).run()
                runs[result.label] = result

    return RunDiagnostics(
        scenario=config.name,
        dx={edge.id: edge.dx for edge in net.edges},
        centers={edge.id: (np.arange(edge.cells) + 0.5) * edge.dx for edge in net.edges},
        runs=runs,
    )
