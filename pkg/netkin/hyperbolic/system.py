from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from netkin.base import SpectrumError, typechecked


EIGEN_TOLERANCE = 1e-12
MAX_CONDITION = 1e12


class EdgeGrid(BaseModel):
    """Uniform finite-volume grid of one edge."""

    model_config = ConfigDict(frozen=True)

    cells: int = Field(description="Number of cells", ge=2)
    length: float = Field(description="Edge length", gt=0)

    @property
    def dx(self) -> float:
        return self.length / self.cells

    @cached_property
    def centers(self) -> np.ndarray:
        return (np.arange(self.cells) + 0.5) * self.dx


class LinearHyperbolicSystem(BaseModel):
    """A constant transport matrix `M` of `u_t + M u_x = 0` with its real eigendecomposition.

    Columns of `right` are right eigenvectors, rows of `left` the matching left eigenvectors, so that
    `right @ diag(eigenvalues) @ left == matrix` and `left @ right == I`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def max_speed(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    @cached_property
    def plus(self) -> np.ndarray:
        """The part `A+` of the matrix carried by right-going characteristics."""
        return self.right @ np.diag(np.maximum(self.eigenvalues, 0.0)) @ self.left

    @cached_property
    def minus(self) -> np.ndarray:
        return self.right @ np.diag(np.minimum(self.eigenvalues, 0.0)) @ self.left

    @property
    def incoming(self) -> np.ndarray:
        """Mask of characteristics entering an edge at its left end."""
        return self.eigenvalues > 0

    def characteristic(self, u: np.ndarray) -> np.ndarray:
        """Characteristic variables of states whose last axis holds the components."""
        return u @ self.left.T

    def physical(self, w: np.ndarray) -> np.ndarray:
        return w @ self.right.T

    def scaled(self, factor: float) -> "LinearHyperbolicSystem":
        """The system of `factor * matrix` for `factor > 0`; eigenvectors are shared."""
        if factor <= 0:
            raise ValueError(f"scaling factor must be positive, got {factor}")
        return LinearHyperbolicSystem(
            matrix=factor * self.matrix, eigenvalues=factor * self.eigenvalues, right=self.right, left=self.left
        )


@typechecked
def eigendecompose(matrix: np.ndarray) -> LinearHyperbolicSystem:
    """Diagonalize a transport matrix with real spectrum.

    Eigenvalues are sorted ascending, ties broken by the lexicographic order of the eigenvectors. Each
    eigenvector is normalized to unit length with its largest-magnitude entry positive.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise SpectrumError(f"transport matrix must be square, got shape {matrix.shape}")

    values, vectors = np.linalg.eig(matrix)
    scale = max(1.0, float(np.max(np.abs(values))))
    if np.max(np.abs(np.imag(values))) > EIGEN_TOLERANCE * scale:
        raise SpectrumError(f"transport matrix has complex eigenvalues {values}")
    values = np.real(values)
    vectors = np.real(vectors)

    vectors = vectors / np.linalg.norm(vectors, axis=0)
    pivots = np.argmax(np.abs(vectors), axis=0)
    vectors = vectors * np.sign(vectors[pivots, np.arange(vectors.shape[1])])

    # np.lexsort sorts by the last key first
    order = np.lexsort(tuple(vectors[::-1]) + (values,))
    values = values[order]
    right = vectors[:, order]

    if np.linalg.cond(right) > MAX_CONDITION:
        raise SpectrumError(f"transport matrix is defective (eigenvalues {values})")
    left = np.linalg.inv(right)

    reconstruction = right @ np.diag(values) @ left
    if np.max(np.abs(reconstruction - matrix)) > EIGEN_TOLERANCE * max(1.0, float(np.max(np.abs(matrix)))):
        raise SpectrumError("eigendecomposition does not reproduce the transport matrix")
    if np.max(np.abs(left @ right - np.eye(matrix.shape[0]))) > EIGEN_TOLERANCE:
        raise SpectrumError("left and right eigenvectors are not biorthogonal")

    return LinearHyperbolicSystem(matrix=matrix, eigenvalues=values, right=right, left=left)
