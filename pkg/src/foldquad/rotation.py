"""Rotation algebra on SO(3): hat/vee maps, tracking errors, exponential-map integration."""

import numpy as np

SKEW_TOL = 1e-9


def cross(a, b):
    """3-vector cross product (np.cross has large per-call overhead)."""
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def hat(v):
    """Skew-symmetric matrix S such that S @ y == np.cross(v, y)."""
    x, y, z = np.asarray(v, dtype=float)
    return np.array([[0.0, -z, y],
                     [z, 0.0, -x],
                     [-y, x, 0.0]])


def vee(S, tol=SKEW_TOL):
    """Inverse of :func:`hat`.

    Raises ValueError if ``S`` is not skew-symmetric to within ``tol``
    (Frobenius norm of ``S + S.T``).
    """
    S = np.asarray(S, dtype=float)
    if S.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {S.shape}")
    asym = np.linalg.norm(S + S.T)
    if not np.isfinite(asym) or asym > tol:
        raise ValueError(f"matrix is not skew-symmetric (|S + S^T| = {asym:.3e})")
    return np.array([S[2, 1], S[0, 2], S[1, 0]])


def expm_so3(w):
    """Rodrigues formula for exp(hat(w))."""
    w = np.asarray(w, dtype=float)
    theta = np.linalg.norm(w)
    K = hat(w)
    if theta < 1e-8:
        # second-order Taylor expansion, truncation error O(theta^3)
        return np.eye(3) + K + 0.5 * K @ K
    return (np.eye(3) + np.sin(theta) / theta * K
            + (1.0 - np.cos(theta)) / theta**2 * K @ K)


def axis_angle(axis, angle):
    """Rotation by ``angle`` radians about ``axis``."""
    axis = np.asarray(axis, dtype=float)
    return expm_so3(angle * axis / np.linalg.norm(axis))


def is_rotation(R, tol=1e-9):
    R = np.asarray(R, dtype=float)
    return (R.shape == (3, 3)
            and np.linalg.norm(R.T @ R - np.eye(3)) <= tol
            and abs(np.linalg.det(R) - 1.0) <= tol)


def attitude_error(R, R_d):
    """e_R = 1/2 (R_d^T R - R^T R_d)^vee."""
    E = R_d.T @ R
    return 0.5 * np.array([E[2, 1] - E[1, 2], E[0, 2] - E[2, 0], E[1, 0] - E[0, 1]])


def rate_error(Omega, R, R_d, Omega_d):
    """e_Omega = Omega - R^T R_d Omega_d."""
    return np.asarray(Omega, dtype=float) - R.T @ (R_d @ np.asarray(Omega_d, dtype=float))


def error_function(R, R_d):
    """Psi(R, R_d) = 1/2 tr(I - R_d^T R), in [0, 2]."""
    return 0.5 * (3.0 - np.trace(R_d.T @ R))


def integrate_rotation(R, Omega, dt):
    """R exp(dt * hat(Omega)) for body rate Omega held constant over dt."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return R @ expm_so3(dt * np.asarray(Omega, dtype=float))


def yaw_of(R):
    """Heading of body b1 projected on the inertial horizontal plane."""
    return float(np.arctan2(R[1, 0], R[0, 0]))


def wrap_angle(a):
    return (a + np.pi) % (2.0 * np.pi) - np.pi
