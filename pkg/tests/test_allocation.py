import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from foldquad.allocation import (ControlInput, SingularAllocation, achieved_input, allocate,
                                 build_cam, cam_determinant, cam_vector, thrust_moments)
from foldquad.dynamics import G
from foldquad.morphology import ArmGeometry, MorphParams, arm_geometry

angle = st.floats(np.radians(-30), np.radians(210), allow_nan=False)


def random_geometry(rng):
    r = rng.uniform(0.01, 0.3, 4)
    gamma = rng.uniform(-np.pi, np.pi, 4)
    pos = np.column_stack([r * np.sin(gamma), r * np.cos(gamma), np.zeros(4)])
    return ArmGeometry(r, gamma, pos, np.zeros(3))


def test_determinant_matches_numeric_on_random_geometries():
    rng = np.random.default_rng(1)
    c = 0.016
    for _ in range(1000):
        g = random_geometry(rng)
        num = np.linalg.det(build_cam(g, c).A)
        assert abs(cam_determinant(g, c) - num) <= 1e-9 * max(abs(num), 1e-12)


def test_plus_configuration_determinant(params):
    g = arm_geometry(np.pi / 2, np.pi / 2, params)
    num = np.linalg.det(build_cam(g, params.c_tau).A)
    assert num == pytest.approx(8 * params.c_tau * params.l**2, rel=1e-12)
    assert cam_determinant(g, params.c_tau) == pytest.approx(num, rel=1e-12)


def test_coincident_arms_are_singular():
    g = ArmGeometry(np.full(4, 0.1), np.zeros(4), np.zeros((4, 3)), np.zeros(3))
    cam = build_cam(g, 0.016)
    assert cam.det == pytest.approx(0.0, abs=1e-18)
    with pytest.raises(SingularAllocation):
        allocate(ControlInput(10.0, np.zeros(3)), cam, MorphParams())


def test_hover_allocation(params):
    assert params.total_mass == pytest.approx(1.090)
    g = arm_geometry(np.pi / 2, np.pi / 2, params)
    out = allocate(ControlInput(params.total_mass * G, np.zeros(3)), build_cam(g, params.c_tau),
                   params)
    np.testing.assert_allclose(out.f, 1.090 * 9.81 / 4, atol=1e-12)
    assert abs(out.f[0] - 2.673) < 1e-3
    assert not out.saturated


@settings(max_examples=200)
@given(angle, angle, st.floats(4.0, 16.0), st.floats(-0.05, 0.05), st.floats(-0.05, 0.05),
       st.floats(-0.01, 0.01))
def test_round_trip(b1, b2, f, t1, t2, t3):
    p = MorphParams()
    g = arm_geometry(b1, b2, p)
    cam = build_cam(g, p.c_tau)
    assume(abs(cam.det) > 1e-6)
    u = ControlInput(f, np.array([t1, t2, t3]))
    out = allocate(u, cam, p, clamp=False)
    back = achieved_input(cam, out.f)
    assert abs(back.f - f) <= 1e-9 * f
    np.testing.assert_allclose(back.tau, u.tau, atol=1e-9 * f)


@settings(max_examples=200)
@given(angle, angle, st.lists(st.floats(0, 6), min_size=4, max_size=4))
def test_cam_moments_match_lever_arm_cross_products(b1, b2, thrusts):
    p = MorphParams()
    g = arm_geometry(b1, b2, p)
    u = achieved_input(build_cam(g, p.c_tau), thrusts)
    # independent: sum of (p_i - cg) x (-f_i b3) plus alternating drag
    ref = np.zeros(3)
    for pos, fi, sgn in zip(g.positions, thrusts, (-1, 1, -1, 1)):
        ref += np.cross(pos, [0.0, 0.0, -fi])
        ref[2] += sgn * p.c_tau * fi
    np.testing.assert_allclose(u.tau, ref, atol=1e-10)
    np.testing.assert_allclose(thrust_moments(g, thrusts, p.c_tau), ref, atol=1e-10)
    assert u.f == pytest.approx(sum(thrusts), abs=1e-12)


def test_saturation_is_flagged(params):
    g = arm_geometry(np.pi / 2, np.pi / 2, params)
    cam = build_cam(g, params.c_tau)
    out = allocate(ControlInput(30.0, np.array([0.0, 0.0, 0.0])), cam, params)
    assert out.saturated
    np.testing.assert_allclose(out.f, params.f_max)
    assert out.residual[0] == pytest.approx(4 * params.f_max - 30.0)


def test_cam_vector_row_order():
    u = ControlInput(1.0, np.array([2.0, 3.0, 4.0]))
    np.testing.assert_array_equal(cam_vector(u), [1.0, 3.0, 2.0, 4.0])
