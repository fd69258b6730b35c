import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldquad.morphology import (HingeState, MorphParams, arm_geometry, center_of_gravity,
                                 hinge_step, inertia_matrix, inertia_oracle, motor_positions)

from conftest import lumped_inertia

angle = st.floats(np.radians(-30), np.radians(210), allow_nan=False)


def test_cg_at_equilibrium(params):
    cg = center_of_gravity(np.pi / 2, np.pi / 2, params)
    assert cg.cg_y == pytest.approx(0.0, abs=1e-15)
    assert cg.cg_x == pytest.approx(0.0, abs=1e-15)
    assert cg.cg_z == pytest.approx(-0.0052294, abs=1e-7)


def test_cg_shifts_back_when_both_arms_fold(params):
    cg = center_of_gravity(np.pi / 4, np.pi / 4, params)
    assert cg.cg_x == pytest.approx(-0.015408, abs=1e-6)
    assert cg.cg_y == pytest.approx(0.0, abs=1e-15)


@given(angle, angle)
def test_cg_matches_mass_weighted_mean(b1, b2):
    p = MorphParams()
    _, cg = lumped_inertia(b1, b2, p)
    np.testing.assert_allclose(center_of_gravity(b1, b2, p).xyz, cg, atol=1e-15)


@given(angle, angle)
def test_closed_form_matches_independent_reference(b1, b2):
    p = MorphParams()
    J_ref, _ = lumped_inertia(b1, b2, p)
    np.testing.assert_allclose(inertia_matrix(b1, b2, p), J_ref, rtol=1e-9, atol=1e-15)
    np.testing.assert_allclose(inertia_oracle(b1, b2, p), J_ref, rtol=1e-12, atol=1e-16)


@given(angle, angle)
def test_inertia_symmetric_positive_definite(b1, b2):
    J = inertia_matrix(b1, b2, MorphParams())
    np.testing.assert_allclose(J, J.T, atol=1e-18)
    assert np.linalg.eigvalsh(J).min() > 0


def test_inertia_mirror_symmetry(params):
    # swapping the arms mirrors the body across the q1-q3 plane
    S = np.diag([1.0, -1.0, 1.0])
    J = inertia_matrix(0.6, 1.9, params)
    np.testing.assert_allclose(inertia_matrix(1.9, 0.6, params), S @ J @ S, atol=1e-16)


def test_plus_configuration_is_diagonal(params):
    J = inertia_matrix(np.pi / 2, np.pi / 2, params)
    np.testing.assert_allclose(J - np.diag(np.diag(J)), 0, atol=1e-18)
    assert J[0, 0] == pytest.approx(J[1, 1], rel=1e-12)


def test_motor_positions_plus(params):
    P = motor_positions(np.pi / 2, np.pi / 2, params)
    np.testing.assert_allclose(P, [[0.125, 0, 0], [0, -0.125, -0.03], [-0.125, 0, 0],
                                   [0, 0.125, -0.03]], atol=1e-15)


def test_arm_geometry_lever_arms(params):
    g = arm_geometry(np.pi / 2, np.pi / 2, params)
    np.testing.assert_allclose(g.r, params.l, rtol=1e-12)
    # azimuth from +q2 towards +q1: motor 1 on +q1, motor 4 on +q2
    np.testing.assert_allclose(np.exp(1j * g.gamma), np.exp(1j * np.array([np.pi / 2, np.pi, -np.pi / 2, 0.0])),
                               atol=1e-12)
    np.testing.assert_allclose(g.r * np.sin(g.gamma), g.positions[:, 0], atol=1e-15)
    np.testing.assert_allclose(g.r * np.cos(g.gamma), g.positions[:, 1], atol=1e-15)


def test_arm_geometry_warns_near_cg_axis(params):
    with pytest.warns(RuntimeWarning):
        g = arm_geometry(np.pi / 2, np.pi / 2, MorphParams(l=5e-5))
    assert g.near_singular
    assert not arm_geometry(np.pi / 2, np.pi / 2, params).near_singular


@pytest.mark.parametrize("field,value", [("M", 0.0), ("m", -1.0), ("l", 0.0), ("R_s", -0.1),
                                         ("k_tau", 0.0), ("f_max", -1.0)])
def test_params_validation(field, value):
    with pytest.raises(ValueError):
        MorphParams(**{field: value})


def test_beta_limits_use_folded_width(params):
    lo, hi = params.beta_limits
    assert params.width(lo, lo) == pytest.approx(params.folded_width, rel=1e-9)
    assert hi == pytest.approx(np.pi - lo)


def test_hinge_steady_state_under_constant_torque(params):
    s = HingeState.at(params.beta_eq, params.beta_eq)
    tau = np.array([0.105, -0.105])  # 0.5 rad either way with k_tau = 0.21
    for _ in range(20_000):
        s = hinge_step(s, tau, 1e-3, params)
    np.testing.assert_allclose(s.beta - params.beta_eq, [0.5, -0.5], atol=1e-6)


def test_hinge_free_decay_is_damped(params):
    s = HingeState.at(params.beta_eq + 0.3, params.beta_eq - 0.2)
    amp0 = np.abs(s.beta - params.beta_eq)
    for _ in range(5_000):
        s = hinge_step(s, np.zeros(2), 1e-3, params)
    assert np.all(np.abs(s.beta - params.beta_eq) < 0.1 * amp0)


def test_hinge_stops_clamp(params):
    lo, hi = params.beta_limits
    s = HingeState.at(params.beta_eq, params.beta_eq)
    for _ in range(3_000):
        s = hinge_step(s, np.array([5.0, -5.0]), 1e-3, params)
    np.testing.assert_allclose(s.beta, [hi, lo])
    assert s.beta_dot[0] <= 0 and s.beta_dot[1] >= 0


def test_hinge_rejects_bad_dt(params):
    with pytest.raises(ValueError):
        hinge_step(HingeState(), np.zeros(2), -1e-3, params)
