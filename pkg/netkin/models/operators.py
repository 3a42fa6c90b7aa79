from functools import lru_cache

import numpy as np

from netkin.hyperbolic import LinearHyperbolicSystem, eigendecompose
from netkin.models.params import ModelKind


def central_gradient(
    values: np.ndarray, dx: float, left: np.ndarray | None = None, right: np.ndarray | None = None
) -> np.ndarray:
    """Cell gradients along the last axis.

    Central differences in the interior. At an end with a ghost value the central difference uses the
    ghost, otherwise it falls back to the one-sided difference.
    """
    grad = np.empty_like(values)
    grad[..., 1:-1] = (values[..., 2:] - values[..., :-2]) / (2 * dx)
    if left is None:
        grad[..., 0] = (values[..., 1] - values[..., 0]) / dx
    else:
        grad[..., 0] = (values[..., 1] - left) / (2 * dx)
    if right is None:
        grad[..., -1] = (values[..., -1] - values[..., -2]) / dx
    else:
        grad[..., -1] = (right - values[..., -2]) / (2 * dx)
    return grad


def transport_matrix(kind: ModelKind, phi: float) -> np.ndarray:
    """Transport matrix of the relaxation system; for the kinetic model the velocity-free factor."""
    if kind in (ModelKind.KINETIC, ModelKind.P1):
        return np.array([[0.0, 1.0], [phi, 0.0]])
    if kind is ModelKind.HALF_MOMENT:
        return np.array(
            [
                [0.0, 1.0, 0.0, 0.0],
                [-phi, 0.0, 0.0, 6 * phi],
                [0.0, 0.0, 0.0, phi],
                [0.0, 1.0, -1.0 / 6.0, 0.0],
            ]
        )
    raise ValueError(f"the {kind.value} model has no transport matrix")


@lru_cache(maxsize=64)
def transport_system(kind: ModelKind, phi: float) -> LinearHyperbolicSystem:
    """Cached eigendecomposition per (model, phi)."""
    return eigendecompose(transport_matrix(kind, phi))
