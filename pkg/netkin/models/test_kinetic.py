import numpy as np
import pytest

from netkin.base import CFLViolationError
from netkin.models import (
    KineticEdgeState,
    ModelParams,
    VelocityGrid,
    distribution_halves,
    even_odd,
    kinetic_relax,
    kinetic_transport,
    moments_kinetic,
)


def mirrored(trace):
    """Reflecting ghost: same even part, flipped odd part."""
    return trace * np.array([1.0, -1.0])


# =============================================================================
# even_odd / moments_kinetic
# =============================================================================


def test_symmetric_distribution():
    assert even_odd(0.7, 0.7, 0.3) == (0.7, 0.0)


def test_one_sided_distribution():
    assert even_odd(1.0, 0.0, 1.0) == (0.5, 0.5)


def test_even_odd_inverse():
    rng = np.random.default_rng(2)
    f_plus, f_minus = rng.random(20), rng.random(20)
    r, j = even_odd(f_plus, f_minus, 0.25)
    back_plus, back_minus = distribution_halves(r, j, 0.25)
    np.testing.assert_allclose(back_plus, f_plus, rtol=1e-15)
    np.testing.assert_allclose(back_minus, f_minus, rtol=1e-15)


def test_even_odd_needs_positive_epsilon():
    with pytest.raises(ValueError):
        even_odd(1.0, 0.0, 0.0)


def test_equilibrium_moments():
    vgrid = VelocityGrid(cells=8)
    state = KineticEdgeState.from_parities(np.full((8, 3), 0.5), np.zeros((8, 3)))
    rho, q = moments_kinetic(state, vgrid)
    np.testing.assert_allclose(rho, 1.0)
    np.testing.assert_array_equal(q, 0.0)


def test_flux_quadrature_by_hand():
    vgrid = VelocityGrid(cells=2)
    j = np.repeat(vgrid.velocities[:, None], 2, axis=1)
    state = KineticEdgeState.from_parities(np.zeros((2, 2)), j)
    _, q = moments_kinetic(state, vgrid)
    np.testing.assert_allclose(q, 0.625)


def test_moments_are_linear():
    vgrid = VelocityGrid(cells=5)
    rng = np.random.default_rng(3)
    state = KineticEdgeState(data=rng.random((5, 2, 4)))
    rho, q = moments_kinetic(state, vgrid)
    rho3, q3 = moments_kinetic(state.replace(3 * state.data), vgrid)
    np.testing.assert_allclose(rho3, 3 * rho)
    np.testing.assert_allclose(q3, 3 * q)


# =============================================================================
# kinetic_transport
# =============================================================================


def test_constant_state_unchanged():
    vgrid = VelocityGrid(cells=6)
    rng = np.random.default_rng(4)
    column = rng.random((6, 2))
    state = KineticEdgeState(data=np.repeat(column[:, :, None], 10, axis=2))
    out = kinetic_transport(state, vgrid, 1.0, 0.01, 0.02, (column, column))
    np.testing.assert_allclose(out.data, state.data, atol=1e-15)


def test_slow_velocities_move_less():
    vgrid = VelocityGrid(cells=4)
    r = np.zeros((4, 20))
    r[:, 10] = 1.0
    state = KineticEdgeState.from_parities(r, np.zeros_like(r))
    zeros = np.zeros((4, 2))
    out = kinetic_transport(state, vgrid, 1.0, 0.01, 0.02, (zeros, zeros))
    leaked = 1.0 - out.r[:, 10]
    assert np.all(np.diff(leaked) > 0)
    np.testing.assert_allclose(leaked / vgrid.velocities, leaked[0] / vgrid.velocities[0])


def test_mass_conserved_with_reflecting_ends():
    vgrid = VelocityGrid(cells=5)
    rng = np.random.default_rng(5)
    state = KineticEdgeState(data=rng.random((5, 2, 12)))
    out = kinetic_transport(
        state, vgrid, 1.0, 0.015, 0.02, (mirrored(state.data[:, :, 0]), mirrored(state.data[:, :, -1]))
    )
    assert out.density().sum() == pytest.approx(state.density().sum(), rel=1e-14)


def test_kinetic_cfl_uses_fastest_velocity():
    vgrid = VelocityGrid(cells=2)
    zeros = np.zeros((2, 2))
    state = KineticEdgeState(data=np.zeros((2, 2, 4)))
    # v_max = 0.75, so dt = dx / 0.75 is the largest admissible step for phi = 1
    kinetic_transport(state, vgrid, 1.0, 0.02 / 0.75, 0.02, (zeros, zeros))
    with pytest.raises(CFLViolationError):
        kinetic_transport(state, vgrid, 1.0, 0.03, 0.02, (zeros, zeros))


# =============================================================================
# kinetic_relax
# =============================================================================


def test_relaxed_state_is_a_fixed_point():
    params = ModelParams(epsilon=0.5)
    vgrid = VelocityGrid(cells=4)
    rho, mbar = 2.0, 0.4
    r = np.full((4, 6), rho / 2)
    j = np.repeat(((params.alpha / 2) * vgrid.velocities * mbar * rho / params.lambda_)[:, None], 6, axis=1)
    state = KineticEdgeState.from_parities(r, j)
    out = kinetic_relax(state, np.full(6, mbar), params, vgrid, 0.1, 0.02)
    np.testing.assert_allclose(out.data, state.data, rtol=1e-14)


def test_scalar_backward_euler():
    params = ModelParams(lambda_=1.0, epsilon=1.0)
    vgrid = VelocityGrid(cells=2)
    # r = (1, 0) per velocity gives rho = 1
    r = np.array([[1.0, 1.0], [0.0, 0.0]])
    state = KineticEdgeState.from_parities(r, np.zeros_like(r))
    out = kinetic_relax(state, np.zeros(2), params, vgrid, 1.0, 0.1)
    np.testing.assert_allclose(out.r[0], 0.75)
    np.testing.assert_allclose(out.r[1], 0.25)


def test_relaxation_conserves_cell_mass():
    params = ModelParams(epsilon=0.1)
    vgrid = VelocityGrid(cells=10)
    rng = np.random.default_rng(6)
    state = KineticEdgeState(data=rng.random((10, 2, 8)))
    out = kinetic_relax(state, rng.uniform(-0.5, 0.5, 8), params, vgrid, 0.05, 0.02)
    np.testing.assert_allclose(out.density(), state.density(), rtol=1e-14)


def test_ghosts_enter_boundary_gradient():
    params = ModelParams(epsilon=1.0, phi=0.5)
    vgrid = VelocityGrid(cells=2)
    r = np.repeat(np.array([[0.5], [0.5]]), 4, axis=1)
    state = KineticEdgeState.from_parities(r, np.zeros_like(r))
    ghost = np.array([[1.5, 0.0], [1.5, 0.0]])
    closed = kinetic_relax(state, np.zeros(4), params, vgrid, 0.1, 0.1)
    coupled = kinetic_relax(state, np.zeros(4), params, vgrid, 0.1, 0.1, ghosts=(ghost, None))
    np.testing.assert_array_equal(closed.j, 0.0)
    assert np.all(coupled.j[:, 0] > 0)
    np.testing.assert_array_equal(coupled.j[:, 1:], 0.0)
