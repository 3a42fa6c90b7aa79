from netkin.hyperbolic.system import EdgeGrid, LinearHyperbolicSystem, eigendecompose
from netkin.hyperbolic.upwind import DEFAULT_SAFETY, cfl_dt, upwind_step, upwind_update


__all__ = [
    "DEFAULT_SAFETY",
    "EdgeGrid",
    "LinearHyperbolicSystem",
    "cfl_dt",
    "eigendecompose",
    "upwind_step",
    "upwind_update",
]
