import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldquad.rotation import (attitude_error, axis_angle, error_function, expm_so3, hat,
                               integrate_rotation, is_rotation, rate_error, vee, wrap_angle,
                               yaw_of)

vec = st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3).map(np.array)


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def test_hat_example():
    np.testing.assert_array_equal(hat([1, 2, 3]), [[0, -3, 2], [3, 0, -1], [-2, 1, 0]])


@given(vec, vec)
def test_hat_is_cross_product(a, b):
    np.testing.assert_allclose(hat(a) @ b, np.cross(a, b), atol=1e-12)


@given(vec)
def test_vee_inverts_hat(a):
    np.testing.assert_array_equal(vee(hat(a)), a)


def test_vee_rejects_non_skew():
    with pytest.raises(ValueError):
        vee(np.eye(3))


def test_expm_matches_axis_angle_about_z():
    th = 0.7
    R = expm_so3([0, 0, th])
    np.testing.assert_allclose(R, [[np.cos(th), -np.sin(th), 0], [np.sin(th), np.cos(th), 0],
                                   [0, 0, 1]], atol=1e-15)


@given(vec)
def test_expm_is_rotation(w):
    assert is_rotation(expm_so3(w))


def test_expm_small_angle_series():
    w = np.array([1e-9, -2e-9, 3e-9])
    np.testing.assert_allclose(expm_so3(w), np.eye(3) + hat(w), atol=1e-17)


def test_attitude_errors_vanish_at_target():
    rng = np.random.default_rng(0)
    R = random_rotation(rng)
    assert np.allclose(attitude_error(R, R), 0)
    assert error_function(R, R) == pytest.approx(0, abs=1e-15)
    w = rng.normal(size=3)
    assert np.allclose(rate_error(w, R, R, w), 0)


def test_error_function_range_and_value():
    assert error_function(axis_angle([0, 0, 1], np.pi), np.eye(3)) == pytest.approx(2.0)
    th = 0.4
    assert error_function(axis_angle([1, 0, 0], th), np.eye(3)) == pytest.approx(1 - np.cos(th))


def test_attitude_error_small_angle_is_rotation_vector():
    th = 1e-4
    e = attitude_error(axis_angle([0, 1, 0], th), np.eye(3))
    np.testing.assert_allclose(e, [0, np.sin(th), 0], rtol=1e-12, atol=1e-18)


def test_integrate_rotation_rejects_bad_dt():
    with pytest.raises(ValueError):
        integrate_rotation(np.eye(3), np.ones(3), 0.0)


@settings(max_examples=50)
@given(st.floats(-np.pi + 1e-6, np.pi - 1e-6))
def test_yaw_of_recovers_heading(psi):
    assert yaw_of(axis_angle([0, 0, 1], psi)) == pytest.approx(psi, abs=1e-12)


@given(st.floats(-100, 100))
def test_wrap_angle_range(a):
    w = wrap_angle(a)
    assert -np.pi <= w < np.pi + 1e-12
    assert np.isclose(np.cos(w), np.cos(a), atol=1e-9)


def test_orthonormality_short_run():
    R = np.eye(3)
    w = np.array([0.3, -1.1, 2.0])
    for _ in range(10_000):
        R = integrate_rotation(R, w, 1e-3)
    assert np.linalg.norm(R.T @ R - np.eye(3)) < 1e-11
    np.testing.assert_allclose(R, expm_so3(w * 10.0), atol=1e-10)
