"""Kinetic model in even-odd parity form, one 2x2 relaxation system per velocity cell."""

import numpy as np

from netkin.base import CFLViolationError
from netkin.hyperbolic import upwind_update
from netkin.hyperbolic.upwind import CFL_TOLERANCE
from netkin.models.operators import central_gradient, transport_system
from netkin.models.params import ModelKind, ModelParams, VelocityGrid
from netkin.models.states import KineticEdgeState


def even_odd(f_plus, f_minus, eps: float):
    """Split `f(v), f(-v)` into the even part `r` and the scaled odd part `j`."""
    if eps <= 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    return (f_plus + f_minus) / 2, (f_plus - f_minus) / (2 * eps)


def distribution_halves(r, j, eps: float):
    """Inverse of `even_odd`: `(f(v), f(-v)) = (r + eps j, r - eps j)`."""
    return r + eps * j, r - eps * j


def moments_kinetic(state: KineticEdgeState, vgrid: VelocityGrid) -> tuple[np.ndarray, np.ndarray]:
    """Density and scaled flux `rho = ∫ f dv`, `q = (1/eps) ∫ v f dv`."""
    if state.r.shape[0] != vgrid.cells:
        raise ValueError(f"state has {state.r.shape[0]} velocity cells, grid has {vgrid.cells}")
    rho = vgrid.integrate(state.r)
    q = vgrid.integrate(vgrid.velocities[:, None] * state.j)
    return rho, q


def kinetic_transport(
    state: KineticEdgeState,
    vgrid: VelocityGrid,
    phi: float,
    dt: float,
    dx: float,
    traces: tuple[np.ndarray, np.ndarray],
) -> KineticEdgeState:
    """Upwind step of `r_t + v j_x = 0, j_t + phi v r_x = 0` for every velocity.

    `traces` are the left and right ghost states, each of shape `(N_v, 2)`.
    """
    system = transport_system(ModelKind.KINETIC, phi)
    courant = dt * vgrid.max_velocity * system.max_speed / dx
    if courant > 1.0 + CFL_TOLERANCE:
        raise CFLViolationError(f"Courant number {courant:.6g} exceeds 1 in kinetic transport")

    v = vgrid.velocities[:, None, None]
    left, right = traces
    data = upwind_update(state.data, v * system.plus, v * system.minus, dt / dx, left, right)
    return state.replace(data)


def kinetic_relax(
    state: KineticEdgeState,
    mbar: np.ndarray,
    params: ModelParams,
    vgrid: VelocityGrid,
    dt: float,
    dx: float,
    ghosts: tuple[np.ndarray | None, np.ndarray | None] = (None, None),
) -> KineticEdgeState:
    """Backward Euler step of the stiff sources; `r` relaxes to `rho / 2`, then `j` uses the new `r`.

    `ghosts` are optional neighbour states `(N_v, 2)` beyond each end used by the gradient of `r`;
    missing ghosts give one-sided differences.
    """
    eps2 = params.epsilon**2
    phi = params.phi_for(ModelKind.KINETIC)
    stiffness = dt * params.lambda_ / eps2
    v = vgrid.velocities[:, None]

    def relax_even(r: np.ndarray) -> np.ndarray:
        rho = vgrid.integrate(r)
        return (r + stiffness * rho / 2) / (1 + stiffness)

    r = relax_even(state.r)
    left, right = (None if ghost is None else relax_even(ghost[:, 0]) for ghost in ghosts)
    rho = vgrid.integrate(state.r)

    dr = central_gradient(r, dx, left, right)
    source = (params.alpha / 2) * v * mbar * rho - (1 - eps2 * phi) * v * dr
    j = (state.j + dt / eps2 * source) / (1 + stiffness)
    return KineticEdgeState.from_parities(r, j)
