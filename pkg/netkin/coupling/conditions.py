"""Linear node conditions on the node states of the incident edges.

A block of rows reads `sum_{i,c} (m0 + eps m1)[row, i, c] u[i, c] = rhs[row]`, with `u[i]` the node state of
edge `i` in the all-outgoing frame. Hyperbolic models derive their blocks from a coupling matrix `A`:

* Cattaneo, kinetic derived: `2 (I - A) rho + 3 eps (I + A) q = 0`
* Cattaneo, transmission:    `q_i / sqrt(3) + eps sum_j alpha_ij (rho_i - rho_j) = 0`
* Cattaneo, continuity:      `rho_i - rho_{i+1} = 0`, `sum_i q_i = 0`
* half-moment:               `(I - A) rho + eps (I + A) rho_hat = 0`, `(I - A) q_hat + eps (I + A) q = 0`

When the eps-free part of a block has zero column sums, multiplying by `T` (the identity with its last row
replaced by ones) and dividing the last row by eps removes the eps scaling from that row. At `eps = 0` the
transformed blocks state continuity and zero total flux.
"""

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from netkin.base import CouplingSolveError
from netkin.coupling.matrices import CouplingMatrix


# Cattaneo components (rho, q); half-moment components (rho, q, rho_hat, q_hat)
RHO, Q, RHO_HAT, Q_HAT = 0, 1, 2, 3
LIMIT_TOLERANCE = 1e-12


class KineticDerived(BaseModel):
    kind: Literal["kinetic_derived"] = "kinetic_derived"


class AlphaTransmission(BaseModel):
    kind: Literal["alpha_transmission"] = "alpha_transmission"
    alpha: float | list[list[float]] = Field(
        description="Transmission coefficients alpha_ij, a scalar for a uniform choice", default=1.0
    )

    def coefficients(self, degree: int) -> np.ndarray:
        if isinstance(self.alpha, (int, float)):
            coefficients = np.full((degree, degree), float(self.alpha))
        else:
            coefficients = np.array(self.alpha, dtype=float)
            if coefficients.shape != (degree, degree):
                raise CouplingSolveError(f"expected {degree}x{degree} transmission coefficients")
        np.fill_diagonal(coefficients, 0.0)
        if np.any(coefficients < 0):
            raise CouplingSolveError("transmission coefficients must be non-negative")
        if not np.allclose(coefficients.sum(axis=0), coefficients.sum(axis=1), rtol=1e-12, atol=0):
            raise CouplingSolveError("transmission coefficients must satisfy sum_i (alpha_ij - alpha_ji) = 0")
        return coefficients


class DensityContinuity(BaseModel):
    kind: Literal["density_continuity"] = "density_continuity"


CattaneoVariant = Union[KineticDerived, AlphaTransmission, DensityContinuity]
CattaneoCouplingVariant = Annotated[CattaneoVariant, Field(discriminator="kind")]


class ConditionBlock(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    m0: np.ndarray
    m1: np.ndarray
    rhs: np.ndarray
    limit_form: bool = False

    @property
    def rows(self) -> int:
        return self.m0.shape[0]

    def weights(self, eps: float) -> np.ndarray:
        return self.m0 + eps * self.m1

    @property
    def transformable(self) -> bool:
        return not self.limit_form and bool(np.allclose(self.m0.sum(axis=0), 0.0, rtol=0, atol=LIMIT_TOLERANCE))

    def limit_transformed(self, eps: float) -> "ConditionBlock":
        """`T` applied to the block; the last row becomes eps-free."""
        total_rhs = float(self.rhs.sum())
        if total_rhs != 0 and eps == 0:
            raise CouplingSolveError(f"block {self.name} has no eps -> 0 limit with inhomogeneous data")
        m0 = self.m0.copy()
        m1 = self.m1.copy()
        rhs = self.rhs.copy()
        m0[-1] = self.m1.sum(axis=0)
        m1[-1] = 0.0
        rhs[-1] = total_rhs / eps if total_rhs else 0.0
        return ConditionBlock(name=self.name, m0=m0, m1=m1, rhs=rhs, limit_form=True)


class NodeConditions(BaseModel):
    model_config = ConfigDict(frozen=True)

    degree: int
    components: int
    blocks: list[ConditionBlock]

    @property
    def rows(self) -> int:
        return sum(block.rows for block in self.blocks)

    def weights(self, eps: float) -> np.ndarray:
        """Stacked row weights of shape `(rows, degree, components)`."""
        return np.concatenate([block.weights(eps) for block in self.blocks])

    def matrix(self, eps: float) -> np.ndarray:
        return self.weights(eps).reshape(self.rows, self.degree * self.components)

    @property
    def rhs(self) -> np.ndarray:
        return np.concatenate([block.rhs for block in self.blocks])

    def residual(self, states: np.ndarray, eps: float) -> np.ndarray:
        return self.matrix(eps) @ np.asarray(states, dtype=float).reshape(-1) - self.rhs


def _zeros(rows: int, degree: int, components: int) -> np.ndarray:
    return np.zeros((rows, degree, components))


def _mixing_block(
    name: str, A: CouplingMatrix, components: int, even: int, odd: int, even_scale: float = 1.0, odd_scale: float = 1.0
) -> ConditionBlock:
    """`even_scale (I - A) u_even + eps odd_scale (I + A) u_odd = 0`."""
    n = A.order
    identity = np.eye(n)
    m0 = _zeros(n, n, components)
    m1 = _zeros(n, n, components)
    m0[:, :, even] = even_scale * (identity - A.entries)
    m1[:, :, odd] = odd_scale * (identity + A.entries)
    return ConditionBlock(name=name, m0=m0, m1=m1, rhs=np.zeros(n))


def cattaneo_conditions(variant: CattaneoVariant, A: CouplingMatrix) -> NodeConditions:
    n = A.order
    if isinstance(variant, KineticDerived):
        block = _mixing_block("kinetic_derived", A, 2, RHO, Q, even_scale=2.0, odd_scale=3.0)
    elif isinstance(variant, AlphaTransmission):
        coefficients = variant.coefficients(n)
        laplacian = np.diag(coefficients.sum(axis=1)) - coefficients
        m0 = _zeros(n, n, 2)
        m1 = _zeros(n, n, 2)
        m0[:, :, Q] = np.eye(n) / np.sqrt(3.0)
        m1[:, :, RHO] = laplacian
        block = ConditionBlock(name="alpha_transmission", m0=m0, m1=m1, rhs=np.zeros(n))
    else:
        m0 = _zeros(n, n, 2)
        for i in range(n - 1):
            m0[i, i, RHO] = 1.0
            m0[i, i + 1, RHO] = -1.0
        m0[n - 1, :, Q] = 1.0
        block = ConditionBlock(name="density_continuity", m0=m0, m1=_zeros(n, n, 2), rhs=np.zeros(n))
    return NodeConditions(degree=n, components=2, blocks=[block])


def half_moment_conditions(A: CouplingMatrix) -> NodeConditions:
    return NodeConditions(
        degree=A.order,
        components=4,
        blocks=[
            _mixing_block("rho/rho_hat", A, 4, RHO, RHO_HAT),
            _mixing_block("q_hat/q", A, 4, Q_HAT, Q),
        ],
    )


def _inflow_block(components: int, rows: list[tuple[int, int, float, float]]) -> NodeConditions:
    """Rows `u[even] + eps scale u[odd] = value` of a degree-1 node with prescribed inflow."""
    m0 = _zeros(len(rows), 1, components)
    m1 = _zeros(len(rows), 1, components)
    for row, (even, odd, scale, _) in enumerate(rows):
        m0[row, 0, even] = 1.0
        m1[row, 0, odd] = scale
    rhs = np.array([value for *_, value in rows], dtype=float)
    block = ConditionBlock(name="inflow", m0=m0, m1=m1, rhs=rhs)
    return NodeConditions(degree=1, components=components, blocks=[block])


def cattaneo_inflow_conditions(density: float) -> NodeConditions:
    """Dirichlet data `rho = density` of a degree-1 node, the eps = 0 limit of an inflow `f(+v) = density / 2`."""
    return _inflow_block(2, [(RHO, Q, 0.0, density)])


def half_moment_inflow_conditions(density: float) -> NodeConditions:
    """Half-range moments of an inflow `f(+v) = density / 2`.

    The rows `rho + eps rho_hat = density` and `q_hat + eps q = density / 2` reduce to the Dirichlet data
    `rho = density`, `q_hat = density / 2` at eps = 0.
    """
    return _inflow_block(4, [(RHO, RHO_HAT, 1.0, density), (Q_HAT, Q, 1.0, density / 2)])


def epsilon_limit_check(conditions: NodeConditions, eps: float) -> NodeConditions:
    """Apply the limit transformation `T` to every block whose eps-free part has zero column sums.

    The returned conditions have the same solution set as the input for `eps > 0`; `matrix(0.0)` of the
    result gives the limit relations.
    """
    if eps < 0:
        raise ValueError(f"epsilon must be non-negative, got {eps}")
    blocks = [block.limit_transformed(eps) if block.transformable else block for block in conditions.blocks]
    return NodeConditions(degree=conditions.degree, components=conditions.components, blocks=blocks)


def equivalent_transmission_alpha(eps: float, degree: int = 3) -> float:
    """Uniform `alpha_ij` for which the transmission form reproduces the kinetic-derived conditions."""
    if degree < 3:
        raise CouplingSolveError("the transmission form matches the kinetic-derived one only for degree >= 3")
    return 2.0 / (3.0 * np.sqrt(3.0) * eps**2 * (degree - 2))
