import numpy as np
import pytest
from pydantic import ValidationError

from netkin.models import ModelKind, ModelParams, VelocityGrid, init_from_density


# =============================================================================
# ModelParams
# =============================================================================


def test_defaults_are_valid():
    params = ModelParams()
    assert params.lambda_ == 1.0
    assert params.gamma_m == 0.1


def test_lambda_alias():
    assert ModelParams.model_validate({"lambda": 2.0, "epsilon": 1.0}).lambda_ == 2.0


def test_turnaround_condition_rejected():
    with pytest.raises(ValidationError, match="lambda >= epsilon"):
        ModelParams(lambda_=1.0, alpha=1.0, epsilon=1.5)


def test_turnaround_condition_boundary_accepted():
    assert ModelParams(lambda_=1.0, alpha=2.0, epsilon=0.5).epsilon == 0.5


@pytest.mark.parametrize(
    "kind, expected", [(ModelKind.KINETIC, 1.0), (ModelKind.P1, 1.0 / 3.0), (ModelKind.HALF_MOMENT, 1.0 / 6.0)]
)
def test_default_phi(kind, expected):
    assert ModelParams().phi_for(kind) == pytest.approx(expected)


def test_phi_above_admissible_range():
    params = ModelParams(epsilon=1.0, phi=0.5)
    assert params.phi_for(ModelKind.KINETIC) == 0.5
    with pytest.raises(ValueError, match="admissible"):
        params.phi_for(ModelKind.P1)


def test_zero_relaxation_speed_rejected():
    with pytest.raises(ValidationError):
        ModelParams(phi=0.0)
    with pytest.raises(ValueError, match="without a relaxation speed"):
        ModelParams(alpha=0.0).phi_for(ModelKind.P1)


def test_negative_rates_rejected():
    with pytest.raises(ValidationError):
        ModelParams(gamma_m=-1.0)
    with pytest.raises(ValidationError):
        ModelParams(D=0.0)


# =============================================================================
# VelocityGrid
# =============================================================================


def test_velocity_midpoints():
    vgrid = VelocityGrid(cells=4)
    np.testing.assert_allclose(vgrid.velocities, [0.125, 0.375, 0.625, 0.875])
    assert vgrid.dv == 0.25


def test_quadrature_measure_and_affine_exactness():
    vgrid = VelocityGrid(cells=7)
    assert vgrid.integrate(np.ones(7)) == pytest.approx(2.0)
    # 2 ∫_0^1 (3 v + 1) dv = 5
    assert vgrid.integrate(3 * vgrid.velocities + 1) == pytest.approx(5.0)


# =============================================================================
# init_from_density
# =============================================================================


def test_kinetic_equilibrium():
    vgrid = VelocityGrid(cells=10)
    state = init_from_density(np.ones(5), ModelKind.KINETIC, vgrid)
    np.testing.assert_array_equal(state.r, 0.5)
    np.testing.assert_array_equal(state.j, 0.0)
    np.testing.assert_allclose(state.density(), 1.0, rtol=1e-15)


def test_half_moment_equilibrium():
    state = init_from_density(np.ones(3), ModelKind.HALF_MOMENT)
    np.testing.assert_array_equal(state.data[:, 0], [1.0, 0.0, 0.0, 0.5])


@pytest.mark.parametrize("kind", list(ModelKind))
def test_zero_density_gives_zero_state(kind):
    state = init_from_density(np.zeros(4), kind, VelocityGrid(cells=3))
    assert not np.any(state.data)


def test_negative_density_rejected():
    with pytest.raises(ValueError, match="non-negative"):
        init_from_density(np.array([1.0, -0.1]), ModelKind.P1)


def test_kinetic_needs_velocity_grid():
    with pytest.raises(ValueError):
        init_from_density(np.ones(3), ModelKind.KINETIC)
