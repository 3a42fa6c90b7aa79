import numpy as np
import pytest

from netkin.base import StabilityError
from netkin.models import (
    ChemoEdgeState,
    KSEdgeState,
    ModelParams,
    chemo_step,
    flux_limited_gradient,
    keller_segel_step,
)


# =============================================================================
# flux_limited_gradient
# =============================================================================


def test_constant_chemoattractant_has_no_drift():
    np.testing.assert_array_equal(flux_limited_gradient(ChemoEdgeState(data=[np.full(6, 2.0)]), 0.1), 0.0)


def test_unit_slope():
    dx = 0.1
    m = ChemoEdgeState(data=[np.arange(8) * dx])
    np.testing.assert_allclose(flux_limited_gradient(m, dx), 1 / np.sqrt(2), rtol=1e-12)


def test_steep_slope_stays_below_one():
    dx = 1.0
    m = ChemoEdgeState(data=[np.arange(5) * 1e6])
    mbar = flux_limited_gradient(m, dx)
    assert np.all(mbar < 1.0)
    np.testing.assert_allclose(mbar, 1 - 5e-13, atol=1e-15)


def test_node_value_mirrors_boundary_cell():
    dx = 0.5
    m = ChemoEdgeState(data=[np.array([1.0, 2.0, 3.0])])
    mbar = flux_limited_gradient(m, dx, node_values=(0.5, None))
    # ghost 2 * 0.5 - 1 = 0, so the left cell sees (2 - 0) / (2 dx) = 2
    assert mbar[0] == pytest.approx(2 / np.sqrt(5))


# =============================================================================
# keller_segel_step
# =============================================================================


def test_uniform_density_without_drift_is_steady():
    state = KSEdgeState(data=[np.full(5, 0.7)])
    out = keller_segel_step(state, np.zeros(5), ModelParams(), 1e-4, 0.02)
    np.testing.assert_allclose(out.rho, 0.7, rtol=1e-15)


def test_closed_edge_conserves_mass():
    rng = np.random.default_rng(12)
    state = KSEdgeState(data=[rng.random(20)])
    out = state
    for _ in range(50):
        out = keller_segel_step(out, rng.uniform(-0.9, 0.9, 20), ModelParams(), 5e-4, 0.05)
    assert out.rho.sum() == pytest.approx(state.rho.sum(), abs=1e-12)


def test_diffusion_flux_by_hand():
    state = KSEdgeState(data=[[1.0, 0.0, 0.0]])
    out = keller_segel_step(state, np.zeros(3), ModelParams(lambda_=1.0), 1.0, 1.0)
    np.testing.assert_allclose(out.rho, [2 / 3, 1 / 3, 0.0], rtol=1e-15)


def test_boundary_fluxes_move_mass():
    state = KSEdgeState(data=[np.zeros(4)])
    out = keller_segel_step(state, np.zeros(4), ModelParams(), 0.01, 0.25, boundary_fluxes=(1.0, 0.5))
    assert out.rho.sum() * 0.25 == pytest.approx(0.01 * (1.0 - 0.5))


def test_keller_segel_stability_bound():
    state = KSEdgeState(data=[np.zeros(4)])
    with pytest.raises(StabilityError):
        keller_segel_step(state, np.zeros(4), ModelParams(lambda_=1.0), 0.01, 0.05)


# =============================================================================
# chemo_step
# =============================================================================


def test_zero_stays_zero():
    out = chemo_step(ChemoEdgeState(data=[np.zeros(4)]), np.zeros(4), ModelParams(), 1e-4, 0.1)
    np.testing.assert_array_equal(out.m, 0.0)


def test_production_decay_balance_is_steady():
    params = ModelParams(gamma_rho=1.0, gamma_m=0.1)
    rho = np.full(6, 2.0)
    m = np.full(6, params.gamma_rho * 2.0 / params.gamma_m)
    out = chemo_step(ChemoEdgeState(data=[m]), rho, params, 1e-3, 0.1)
    np.testing.assert_allclose(out.m, m, rtol=1e-15)


def test_scalar_decay():
    params = ModelParams(D=1.0, gamma_m=0.1)
    out = chemo_step(ChemoEdgeState(data=[np.ones(3)]), np.zeros(3), params, 0.1, 1.0)
    np.testing.assert_allclose(out.m, 0.99)


def test_node_value_drives_boundary_flux():
    params = ModelParams(D=1.0, gamma_rho=0.0, gamma_m=0.0)
    out = chemo_step(ChemoEdgeState(data=[np.zeros(3)]), np.zeros(3), params, 0.1, 1.0, node_values=(1.0, None))
    # ghost 2 * 1 - 0 = 2 enters the first cell only
    np.testing.assert_allclose(out.m, [0.2, 0.0, 0.0])


def test_chemo_stability_bound():
    with pytest.raises(StabilityError):
        chemo_step(ChemoEdgeState(data=[np.zeros(3)]), np.zeros(3), ModelParams(D=1.0), 0.01, 0.1)
