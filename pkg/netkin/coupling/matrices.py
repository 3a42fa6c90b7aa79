import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from netkin.base import CouplingSolveError, typechecked


AXIOM_TOLERANCE = 1e-12


def coupling_axioms(entries: np.ndarray, tol: float = AXIOM_TOLERANCE) -> dict[str, bool]:
    """Check each admissibility axiom of a node matrix separately."""
    entries = np.asarray(entries, dtype=float)
    n = entries.shape[0]
    return {
        "mass_conservation": bool(np.allclose(entries.sum(axis=0), 1.0, rtol=0, atol=tol)),
        "positivity": bool(np.all(entries >= -tol)),
        # a single edge is closed by reflection, the only admissible 1x1 matrix is [[1]]
        "zero_diagonal": n == 1 or bool(np.allclose(np.diag(entries), 0.0, rtol=0, atol=tol)),
        "continuity": bool(np.allclose(entries.sum(axis=1), 1.0, rtol=0, atol=tol)),
    }


class CouplingMatrix(BaseModel):
    """Node matrix `A` of the kinetic coupling `f(+v) = A f(-v)` in the all-outgoing frame.

    Admissible matrices have unit column sums (mass conservation), non-negative entries, unit row sums
    (continuity of the density) and, for junctions, a zero diagonal.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _as_square_array(cls, value) -> np.ndarray:
        entries = np.array(value, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise ValueError(f"coupling matrix must be square and non-empty, got shape {entries.shape}")
        return entries

    @model_validator(mode="after")
    def _check_axioms(self) -> "CouplingMatrix":
        failed = [name for name, ok in coupling_axioms(self.entries).items() if not ok]
        if failed:
            raise ValueError(f"coupling matrix violates {', '.join(failed)}")
        return self

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def reflecting(cls) -> "CouplingMatrix":
        return cls(entries=[[1.0]])


@typechecked
def kinetic_coupling_matrix(n: int) -> CouplingMatrix:
    """Uniform redistribution `a_ij = 1/(N-1)` for `i != j`."""
    if n < 2:
        raise CouplingSolveError(f"a junction needs at least two edges, got {n}")
    entries = np.full((n, n), 1.0 / (n - 1))
    np.fill_diagonal(entries, 0.0)
    return CouplingMatrix(entries=entries)


@typechecked
def cyclic_coupling_matrix(alpha: float) -> CouplingMatrix:
    """The admissible 3x3 family `[[0, a, 1-a], [1-a, 0, a], [a, 1-a, 0]]`; `a = 1/2` is uniform."""
    if not 0 <= alpha <= 1:
        raise CouplingSolveError(f"cyclic coupling parameter must lie in [0, 1], got {alpha}")
    return CouplingMatrix(entries=[[0.0, alpha, 1 - alpha], [1 - alpha, 0.0, alpha], [alpha, 1 - alpha, 0.0]])
