from typing import Sequence

import numpy as np

from netkin.base import CFLViolationError, typechecked
from netkin.hyperbolic.system import EdgeGrid, LinearHyperbolicSystem


CFL_TOLERANCE = 1e-12
DEFAULT_SAFETY = 0.9


def upwind_update(
    state: np.ndarray,
    plus: np.ndarray,
    minus: np.ndarray,
    ratio: float,
    left_trace: np.ndarray,
    right_trace: np.ndarray,
) -> np.ndarray:
    """Conservative first-order upwind update without CFL check.

    `state` has shape `(..., n, cells)`, the flux splitting `plus`/`minus` shape `(..., n, n)` and the ghost
    values shape `(..., n)`; leading axes broadcast, which lets the kinetic model advance all velocities at once.
    The numerical flux at a face is `plus @ u_left + minus @ u_right`.
    """
    extended = np.concatenate([left_trace[..., None], state, right_trace[..., None]], axis=-1)
    flux = plus @ extended[..., :-1] + minus @ extended[..., 1:]
    return state - ratio * (flux[..., 1:] - flux[..., :-1])


@typechecked
def upwind_step(
    state: np.ndarray,
    system: LinearHyperbolicSystem,
    dt: float,
    dx: float,
    left_trace: np.ndarray,
    right_trace: np.ndarray,
) -> np.ndarray:
    """Advance `u_t + M u_x = 0` by one explicit upwind step.

    `state` has shape `(n, cells)`; the traces are the ghost states beyond the left and right ends.
    """
    courant = dt * system.max_speed / dx
    if courant > 1.0 + CFL_TOLERANCE:
        raise CFLViolationError(f"Courant number {courant:.6g} exceeds 1 (dt={dt:.6g}, dx={dx:.6g})")
    return upwind_update(
        np.asarray(state, dtype=float),
        system.plus,
        system.minus,
        dt / dx,
        np.asarray(left_trace, dtype=float),
        np.asarray(right_trace, dtype=float),
    )


@typechecked
def cfl_dt(
    systems: Sequence[LinearHyperbolicSystem | None],
    grids: Sequence[EdgeGrid],
    parabolic_coeffs: Sequence[float] = (),
    safety: float = DEFAULT_SAFETY,
) -> float:
    """Largest stable global time step.

    `systems` is aligned with `grids` (one transport system per edge, `None` for purely parabolic edges) or
    empty. The diffusivities in `parabolic_coeffs` act on every edge.
    """
    if not grids:
        raise ValueError("cfl_dt needs at least one grid")
    if systems and len(systems) != len(grids):
        raise ValueError(f"got {len(systems)} systems for {len(grids)} grids")
    if not 0 < safety <= 1:
        raise ValueError(f"safety factor must lie in (0, 1], got {safety}")

    max_diffusivity = max(parabolic_coeffs, default=0.0)
    bounds = []
    for i, grid in enumerate(grids):
        system = systems[i] if systems else None
        if system is not None and system.max_speed > 0:
            bounds.append(grid.dx / system.max_speed)
        if max_diffusivity > 0:
            bounds.append(grid.dx**2 / (2 * max_diffusivity))
    if not bounds:
        raise ValueError("cfl_dt needs a transport system or a positive diffusivity")
    return safety * min(bounds)
