"""Cattaneo (P1) model: `rho_t + q_x = 0`, relaxation system `q_t + phi rho_x = -(1/eps^2)(...)`."""

import numpy as np

from netkin.hyperbolic import upwind_step
from netkin.models.operators import central_gradient, transport_system
from netkin.models.params import ModelKind, ModelParams
from netkin.models.states import P1EdgeState


def p1_transport(
    state: P1EdgeState, phi: float, dt: float, dx: float, traces: tuple[np.ndarray, np.ndarray]
) -> P1EdgeState:
    system = transport_system(ModelKind.P1, phi)
    left, right = traces
    return state.replace(upwind_step(state.data, system, dt, dx, left, right))


def p1_relax(
    state: P1EdgeState,
    mbar: np.ndarray,
    params: ModelParams,
    dt: float,
    dx: float,
    ghosts: tuple[np.ndarray | None, np.ndarray | None] = (None, None),
) -> P1EdgeState:
    """Backward Euler step of the flux source; the density is untouched."""
    eps2 = params.epsilon**2
    phi = params.phi_for(ModelKind.P1)
    rho = state.rho
    left, right = (None if ghost is None else ghost[0] for ghost in ghosts)

    drho = central_gradient(rho, dx, left, right)
    source = (params.alpha / 3) * mbar * rho - (1.0 / 3.0 - eps2 * phi) * drho
    q = (state.q + dt / eps2 * source) / (1 + dt * params.lambda_ / eps2)
    return state.replace(np.stack([rho, q]))
