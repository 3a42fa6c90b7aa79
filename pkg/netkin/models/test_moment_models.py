import numpy as np
import pytest

from netkin.models import (
    HalfMomentEdgeState,
    ModelKind,
    ModelParams,
    P1EdgeState,
    half_moments,
    hm_relax,
    hm_transport,
    p1_relax,
    p1_transport,
    transport_system,
)


# =============================================================================
# Cattaneo (P1)
# =============================================================================


def test_p1_constant_state_unchanged():
    value = np.array([1.3, -0.2])
    state = P1EdgeState(data=np.repeat(value[:, None], 7, axis=1))
    out = p1_transport(state, 1.0 / 3.0, 0.01, 0.02, (value, value))
    np.testing.assert_allclose(out.data, state.data, atol=1e-15)


def test_p1_default_speeds():
    phi = ModelParams().phi_for(ModelKind.P1)
    np.testing.assert_allclose(transport_system(ModelKind.P1, phi).eigenvalues, [-1 / np.sqrt(3), 1 / np.sqrt(3)])


def test_p1_mass_changes_by_boundary_flux():
    rng = np.random.default_rng(7)
    state = P1EdgeState(data=rng.random((2, 10)))
    left, right = rng.random(2), rng.random(2)
    system = transport_system(ModelKind.P1, 1.0 / 3.0)
    dt, dx = 0.02, 0.02
    out = p1_transport(state, 1.0 / 3.0, dt, dx, (left, right))
    inflow = (system.plus @ left + system.minus @ state.data[:, 0])[0]
    outflow = (system.plus @ state.data[:, -1] + system.minus @ right)[0]
    assert out.rho.sum() == pytest.approx(state.rho.sum() + dt / dx * (inflow - outflow), abs=1e-14)


def test_p1_equilibrium_is_fixed_point():
    params = ModelParams(epsilon=0.3)
    rho = np.linspace(1.0, 2.0, 9)
    mbar = np.full(9, 0.25)
    dx = 0.1
    drho = np.gradient(rho, dx)
    q = ((params.alpha / 3) * mbar * rho - (1 / 3 - params.epsilon**2 / 3) * drho) / params.lambda_
    state = P1EdgeState(data=[rho, q])
    out = p1_relax(state, mbar, params, 0.05, dx)
    np.testing.assert_allclose(out.q, q, rtol=1e-12)


def test_p1_scalar_relaxation():
    params = ModelParams(lambda_=1.0, epsilon=1.0, phi=1.0 / 3.0)
    state = P1EdgeState(data=[np.ones(3), np.zeros(3)])
    out = p1_relax(state, np.ones(3), params, 1.0, 0.1)
    np.testing.assert_allclose(out.q, 1.0 / 6.0)


def test_p1_small_epsilon_gives_keller_segel_flux():
    params = ModelParams(epsilon=1e-6)
    rho = np.linspace(0.0, 1.0, 6) ** 2
    mbar = np.linspace(-0.5, 0.5, 6)
    dx = 0.2
    state = P1EdgeState(data=[rho, np.zeros(6)])
    out = p1_relax(state, mbar, params, 0.01, dx)
    expected = (params.alpha * mbar * rho - np.gradient(rho, dx)) / (3 * params.lambda_)
    np.testing.assert_allclose(out.q, expected, atol=1e-8)


def test_p1_relaxation_keeps_density_bits():
    rng = np.random.default_rng(8)
    state = P1EdgeState(data=rng.random((2, 12)))
    out = p1_relax(state, rng.uniform(-1, 1, 12), ModelParams(epsilon=0.1), 0.01, 0.02)
    np.testing.assert_array_equal(out.rho, state.rho)


# =============================================================================
# Half-moment
# =============================================================================


def test_half_moment_constant_state_unchanged():
    value = np.array([1.0, 0.1, -0.2, 0.5])
    state = HalfMomentEdgeState(data=np.repeat(value[:, None], 5, axis=1))
    out = hm_transport(state, 1.0 / 6.0, 0.01, 0.02, (value, value))
    np.testing.assert_allclose(out.data, state.data, atol=1e-15)


def test_half_moment_density_row_is_conservative():
    rng = np.random.default_rng(9)
    state = HalfMomentEdgeState(data=rng.random((4, 10)))
    left, right = rng.random(4), rng.random(4)
    system = transport_system(ModelKind.HALF_MOMENT, 1.0 / 6.0)
    dt, dx = 0.02, 0.02
    out = hm_transport(state, 1.0 / 6.0, dt, dx, (left, right))
    inflow = (system.plus @ left + system.minus @ state.data[:, 0])[0]
    outflow = (system.plus @ state.data[:, -1] + system.minus @ right)[0]
    assert out.rho.sum() == pytest.approx(state.rho.sum() + dt / dx * (inflow - outflow), abs=1e-14)


def test_half_moment_equilibrium_is_fixed_point():
    params = ModelParams(epsilon=0.4)
    phi = params.phi_for(ModelKind.HALF_MOMENT)
    eps2 = params.epsilon**2
    rho = np.full(6, 1.5)
    mbar = np.full(6, -0.3)
    q_hat = rho / 2
    rho_hat = (params.alpha / 2) * mbar * rho / params.lambda_
    q = ((params.alpha / 3) * mbar * rho - (1 / 6 - eps2 * phi) * 0.0) / params.lambda_
    state = HalfMomentEdgeState(data=[rho, q, rho_hat, q_hat])
    out = hm_relax(state, mbar, params, 0.02, 0.05)
    np.testing.assert_allclose(out.data, state.data, rtol=1e-13)


def test_half_moment_scalar_relaxation():
    params = ModelParams(epsilon=1.0)
    state = HalfMomentEdgeState(data=[np.ones(3), np.zeros(3), np.zeros(3), np.zeros(3)])
    out = hm_relax(state, np.zeros(3), params, 1.0, 0.1)
    np.testing.assert_allclose(out.q_hat, 0.25)


def test_half_moment_relaxation_keeps_density_bits():
    rng = np.random.default_rng(10)
    state = HalfMomentEdgeState(data=rng.random((4, 9)))
    out = hm_relax(state, rng.uniform(-1, 1, 9), ModelParams(epsilon=0.2), 0.01, 0.02)
    np.testing.assert_array_equal(out.rho, state.rho)


def test_half_moment_flux_ignores_density_gradient_at_critical_phi():
    # with eps = 1 and phi = 1/6 the (1/6 - eps^2 phi) coefficient vanishes
    params = ModelParams(epsilon=1.0, phi=1.0 / 6.0)
    rho = np.linspace(0.0, 3.0, 8)
    state = HalfMomentEdgeState(data=[rho, np.zeros(8), np.zeros(8), rho / 2])
    out = hm_relax(state, np.zeros(8), params, 0.1, 0.1)
    np.testing.assert_allclose(out.q, 0.0, atol=1e-15)


def test_half_moments_recover_density():
    rng = np.random.default_rng(11)
    state = HalfMomentEdgeState(data=rng.random((4, 5)))
    rho_plus, rho_minus, q_plus, q_minus = half_moments(state, 0.3)
    np.testing.assert_allclose(rho_plus + rho_minus, state.rho, rtol=1e-15)
    np.testing.assert_allclose((q_plus + q_minus) / 0.3, state.q, rtol=1e-14)
