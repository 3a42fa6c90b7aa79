"""Flux-limited Keller-Segel model `rho_t + q_x = 0`, `q = -(1/(3 lambda)) rho_x + (alpha/(3 lambda)) mbar rho`."""

import numpy as np

from netkin.base import StabilityError
from netkin.models.params import ModelParams
from netkin.models.states import KSEdgeState


def keller_segel_stable_dt(params: ModelParams, dx: float) -> float:
    return dx**2 * 3 * params.lambda_ / 2


def keller_segel_step(
    state: KSEdgeState,
    mbar: np.ndarray,
    params: ModelParams,
    dt: float,
    dx: float,
    boundary_fluxes: tuple[float, float] = (0.0, 0.0),
) -> KSEdgeState:
    """Forward Euler step in conservation form.

    `boundary_fluxes` are the mass fluxes `q` (positive along the edge direction) through the left and
    right end faces, as returned by the node solves; zero fluxes close the edge.
    """
    bound = keller_segel_stable_dt(params, dx)
    if dt > bound * (1 + 1e-12):
        raise StabilityError(f"Keller-Segel step dt={dt:.6g} exceeds the diffusive bound {bound:.6g}")

    rho = state.rho
    diffusion = 1.0 / (3 * params.lambda_)
    drift = params.alpha / (3 * params.lambda_)
    rho_face = (rho[1:] + rho[:-1]) / 2
    mbar_face = (mbar[1:] + mbar[:-1]) / 2

    # F = -q on every face
    faces = np.empty(rho.size + 1)
    faces[1:-1] = diffusion * (rho[1:] - rho[:-1]) / dx - drift * mbar_face * rho_face
    faces[0] = -boundary_fluxes[0]
    faces[-1] = -boundary_fluxes[1]
    return state.replace((rho + dt / dx * (faces[1:] - faces[:-1]))[None, :])
