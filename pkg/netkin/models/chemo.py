"""Chemoattractant `m_t = D m_xx + gamma_rho rho - gamma_m m` and its flux-limited gradient."""

import numpy as np

from netkin.base import StabilityError
from netkin.models.operators import central_gradient
from netkin.models.params import ModelParams
from netkin.models.states import ChemoEdgeState


def node_ghosts(m: np.ndarray, node_values: tuple[float | None, float | None]) -> tuple[float | None, float | None]:
    """Mirror cells `2 m* - m_end` beyond each end that has a node value."""
    left, right = node_values
    return (
        None if left is None else 2 * left - m[0],
        None if right is None else 2 * right - m[-1],
    )


def flux_limited_gradient(
    m: ChemoEdgeState, dx: float, node_values: tuple[float | None, float | None] = (None, None)
) -> np.ndarray:
    """Bounded drift factor `g / sqrt(1 + g^2)` of the cell gradients `g` of `m`.

    Without node values the end cells use one-sided differences.
    """
    if m.cells < 2:
        raise ValueError("flux-limited gradient needs at least two cells")
    grad = central_gradient(m.m, dx, *node_ghosts(m.m, node_values))
    return grad / np.sqrt(1 + grad**2)


def chemo_stable_dt(params: ModelParams, dx: float) -> float:
    return dx**2 / (2 * params.D)


def chemo_step(
    state: ChemoEdgeState,
    rho: np.ndarray,
    params: ModelParams,
    dt: float,
    dx: float,
    node_values: tuple[float | None, float | None] = (None, None),
) -> ChemoEdgeState:
    """Forward Euler step with the central Laplacian.

    An end with node value `m*` sees the ghost `2 m* - m_end`; an end without one is closed (zero flux).
    """
    bound = chemo_stable_dt(params, dx)
    if dt > bound * (1 + 1e-12):
        raise StabilityError(f"chemoattractant step dt={dt:.6g} exceeds the diffusive bound {bound:.6g}")

    m = state.m
    left, right = node_ghosts(m, node_values)
    extended = np.concatenate([[m[0] if left is None else left], m, [m[-1] if right is None else right]])
    laplacian = (extended[2:] - 2 * m + extended[:-2]) / dx**2
    m_new = m + dt * (params.D * laplacian + params.gamma_rho * rho - params.gamma_m * m)
    return state.replace(m_new[None, :])
