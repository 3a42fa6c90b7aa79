"""Half-moment model in the variables `(rho, q, rho_hat, q_hat)`.

The half moments are `rho± = (rho ± eps rho_hat) / 2` and `q± = (eps q ± q_hat) / 2`.
"""

import numpy as np

from netkin.hyperbolic import upwind_step
from netkin.models.operators import central_gradient, transport_system
from netkin.models.params import ModelKind, ModelParams
from netkin.models.states import HalfMomentEdgeState


def half_moments(state: HalfMomentEdgeState, eps: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """`(rho+, rho-, q+, q-)` per cell."""
    rho_plus = (state.rho + eps * state.rho_hat) / 2
    rho_minus = (state.rho - eps * state.rho_hat) / 2
    q_plus = (eps * state.q + state.q_hat) / 2
    q_minus = (eps * state.q - state.q_hat) / 2
    return rho_plus, rho_minus, q_plus, q_minus


def hm_transport(
    state: HalfMomentEdgeState, phi: float, dt: float, dx: float, traces: tuple[np.ndarray, np.ndarray]
) -> HalfMomentEdgeState:
    system = transport_system(ModelKind.HALF_MOMENT, phi)
    left, right = traces
    return state.replace(upwind_step(state.data, system, dt, dx, left, right))


def hm_relax(
    state: HalfMomentEdgeState,
    mbar: np.ndarray,
    params: ModelParams,
    dt: float,
    dx: float,
    ghosts: tuple[np.ndarray | None, np.ndarray | None] = (None, None),
) -> HalfMomentEdgeState:
    """Backward Euler steps in the order `q_hat`, `rho_hat`, `q`; the density is untouched."""
    eps2 = params.epsilon**2
    phi = params.phi_for(ModelKind.HALF_MOMENT)
    lam = params.lambda_
    hat_stiffness = dt / eps2
    rho = state.rho

    def relax_q_hat(q_hat: np.ndarray, rho: np.ndarray) -> np.ndarray:
        return (q_hat + hat_stiffness * rho / 2) / (1 + hat_stiffness)

    q_hat = relax_q_hat(state.q_hat, rho)
    ghost_q_hat = [None if g is None else relax_q_hat(g[3], g[0]) for g in ghosts]
    ghost_combined = [None if g is None else -g[0] + 6 * gq for g, gq in zip(ghosts, ghost_q_hat)]

    dq_hat = central_gradient(q_hat, dx, *ghost_q_hat)
    rho_hat_source = (params.alpha / 2) * mbar * rho - (1 - eps2 * phi) * dq_hat
    rho_hat = (state.rho_hat + dt / eps2 * rho_hat_source) / (1 + dt * lam / eps2)

    dcombined = central_gradient(-rho + 6 * q_hat, dx, *ghost_combined)
    q_source = (params.alpha / 3) * mbar * rho - (1.0 / 6.0 - eps2 * phi) * dcombined
    q = (state.q + dt / eps2 * q_source) / (1 + dt * lam / eps2)
    return state.replace(np.stack([rho, q, rho_hat, q_hat]))
