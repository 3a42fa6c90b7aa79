"""Node solves via characteristic decomposition.

All traces and returned node states are given in the node's all-outgoing frame: characteristics with
negative speed arrive at the node from the edge interiors and keep their interior values, those with
positive speed leave the node and are fixed by the node conditions.
"""

import numpy as np

from netkin.base import CouplingSolveError
from netkin.coupling.conditions import (
    CattaneoVariant,
    NodeConditions,
    cattaneo_conditions,
    epsilon_limit_check,
    half_moment_conditions,
)
from netkin.coupling.matrices import CouplingMatrix
from netkin.graph import NodeLocalFrame
from netkin.hyperbolic import LinearHyperbolicSystem
from netkin.models import ModelKind, VelocityGrid, transport_system


# Below this epsilon node systems are solved in their limit-transformed form
PRECONDITION_EPSILON = 1e-3
MAX_CONDITION = 1e14


def _check_degree(frame: NodeLocalFrame, traces: np.ndarray, order: int) -> None:
    if traces.shape[0] != frame.degree or order != frame.degree:
        raise CouplingSolveError(
            f"node {frame.node} has degree {frame.degree}, got {traces.shape[0]} traces and a {order}x{order} matrix"
        )


def _solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if np.linalg.cond(matrix) > MAX_CONDITION:
        raise CouplingSolveError(f"singular node system (condition number {np.linalg.cond(matrix):.3g})")
    return np.linalg.solve(matrix, rhs)


def solve_characteristic_node(
    system: LinearHyperbolicSystem,
    traces: np.ndarray,
    conditions: NodeConditions,
    eps: float,
    precondition_below: float = PRECONDITION_EPSILON,
) -> np.ndarray:
    """Node states satisfying `conditions`, sharing the arriving characteristics with `traces`.

    `traces` has shape `(degree, n)` or `(degree, batch, n)`; the conditions act identically on every batch
    entry.
    """
    traces = np.asarray(traces, dtype=float)
    batched = traces.ndim == 3
    if not batched:
        traces = traces[:, None, :]
    degree = traces.shape[0]
    if degree != conditions.degree or not traces.shape[-1] == conditions.components == system.dimension:
        raise CouplingSolveError(f"node conditions for degree {conditions.degree} do not fit traces {traces.shape}")

    if eps < precondition_below:
        conditions = epsilon_limit_check(conditions, eps)
    weights = conditions.weights(eps)

    incoming = system.incoming
    if conditions.rows != degree * int(incoming.sum()):
        raise CouplingSolveError(
            f"{conditions.rows} node conditions for {degree * int(incoming.sum())} outgoing characteristics"
        )

    arriving = system.characteristic(traces)
    arriving[..., incoming] = 0.0
    known = system.physical(arriving)
    directions = system.right[:, incoming]

    matrix = np.einsum("rin,np->rip", weights, directions).reshape(conditions.rows, -1)
    rhs = conditions.rhs[:, None] - np.einsum("rin,ibn->rb", weights, known)
    strengths = _solve(matrix, rhs).reshape(degree, directions.shape[1], -1)

    states = known + np.einsum("np,ipb->ibn", directions, strengths)
    return states if batched else states[:, 0, :]


def solve_node_kinetic(
    frame: NodeLocalFrame,
    traces: np.ndarray,
    A: CouplingMatrix,
    eps: float,
    phi: float,
    vgrid: VelocityGrid,
    precondition_below: float = PRECONDITION_EPSILON,
) -> np.ndarray:
    """Node parities `(r, j)` per edge and velocity from `f(+v) = A f(-v)`.

    `traces` has shape `(degree, N_v, 2)`. With `w± = j ± sqrt(phi) r` and `a, b = 1/(2 sqrt(phi)) ± eps/2`
    the condition reads `(a I - b A) w+ = (b I - a A) w-`, one solve for all velocities.
    """
    traces = np.asarray(traces, dtype=float)
    _check_degree(frame, traces, A.order)
    if traces.shape[1] != vgrid.cells:
        raise CouplingSolveError(f"expected traces for {vgrid.cells} velocities, got {traces.shape[1]}")
    if phi <= 0:
        raise CouplingSolveError("kinetic node coupling needs phi > 0")

    root = np.sqrt(phi)
    a = 1 / (2 * root) + eps / 2
    b = 1 / (2 * root) - eps / 2
    identity = np.eye(A.order)
    r, j = traces[..., 0], traces[..., 1]
    w_minus = j - root * r

    matrix = a * identity - b * A.entries
    rhs = (b * identity - a * A.entries) @ w_minus
    if eps < precondition_below:
        # column sums of the matrix are eps: the scaled sum row states sum(w+) = -sum(w-)
        matrix[-1] = 1.0
        rhs[-1] = -w_minus.sum(axis=0)
    w_plus = _solve(matrix, rhs)

    return np.stack([(w_plus - w_minus) / (2 * root), (w_plus + w_minus) / 2], axis=-1)


def kinetic_inflow_state(trace: np.ndarray, density: float, eps: float, phi: float) -> np.ndarray:
    """Node parities of a degree-1 node with prescribed inflow `f(+v) = density / 2`."""
    trace = np.asarray(trace, dtype=float)
    root = np.sqrt(phi)
    a = 1 / (2 * root) + eps / 2
    b = 1 / (2 * root) - eps / 2
    w_minus = trace[:, 1] - root * trace[:, 0]
    w_plus = (density / 2 + b * w_minus) / a
    return np.stack([(w_plus - w_minus) / (2 * root), (w_plus + w_minus) / 2], axis=-1)


def solve_node_halfmoment(
    frame: NodeLocalFrame,
    traces: np.ndarray,
    A: CouplingMatrix,
    eps: float,
    phi: float,
    precondition_below: float = PRECONDITION_EPSILON,
) -> np.ndarray:
    """Node states `(rho, q, rho_hat, q_hat)` per edge; two outgoing characteristics per edge."""
    traces = np.asarray(traces, dtype=float)
    _check_degree(frame, traces, A.order)
    system = transport_system(ModelKind.HALF_MOMENT, phi)
    return solve_characteristic_node(system, traces, half_moment_conditions(A), eps, precondition_below)


def solve_node_cattaneo(
    frame: NodeLocalFrame,
    traces: np.ndarray,
    variant: CattaneoVariant,
    A: CouplingMatrix,
    eps: float,
    phi: float,
    precondition_below: float = PRECONDITION_EPSILON,
) -> np.ndarray:
    """Node states `(rho, q)` per edge for the chosen Cattaneo coupling variant."""
    traces = np.asarray(traces, dtype=float)
    _check_degree(frame, traces, A.order)
    system = transport_system(ModelKind.P1, phi)
    return solve_characteristic_node(system, traces, cattaneo_conditions(variant, A), eps, precondition_below)


def solve_node_keller_segel(
    frame: NodeLocalFrame,
    densities: np.ndarray,
    mbar: np.ndarray,
    dx: np.ndarray,
    lambda_: float,
    alpha: float,
    fixed_density: float | None = None,
) -> tuple[float, np.ndarray]:
    """Shared node density `rho*` and the fluxes into the edges.

    The discrete flux into edge `i` is `q_i = -(rho_i - rho*) / (3 lambda h_i) + alpha mbar_i rho* / (3 lambda)`
    with `h_i` half a cell; `rho*` balances `sum_i q_i = 0` unless a Dirichlet value is fixed.
    """
    densities = np.asarray(densities, dtype=float)
    mbar = np.asarray(mbar, dtype=float)
    half = np.asarray(dx, dtype=float) / 2
    if densities.shape[0] != frame.degree:
        raise CouplingSolveError(f"node {frame.node} has degree {frame.degree}, got {densities.shape[0]} densities")

    diffusion = 1.0 / (3 * lambda_)
    drift = alpha / (3 * lambda_)
    if fixed_density is None:
        conductance = float(np.sum(diffusion / half) + drift * np.sum(mbar))
        if conductance <= 0:
            raise CouplingSolveError(f"degenerate Keller-Segel node {frame.node}: total conductance {conductance}")
        rho_star = float(np.sum(diffusion * densities / half)) / conductance
    else:
        rho_star = float(fixed_density)

    fluxes = -diffusion * (densities - rho_star) / half + drift * mbar * rho_star
    return rho_star, fluxes


def solve_node_chemo(
    frame: NodeLocalFrame, values: np.ndarray, D: float, dx: np.ndarray
) -> tuple[float, np.ndarray]:
    """Continuous node value `m*` with Kirchhoff balance `sum_i D (m_i - m*) / h_i = 0`."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] != frame.degree:
        raise CouplingSolveError(f"node {frame.node} has degree {frame.degree}, got {values.shape[0]} values")
    weights = 2.0 / np.asarray(dx, dtype=float)
    m_star = float(np.sum(weights * values) / np.sum(weights))
    return m_star, -D * weights * (values - m_star)
