"""Control allocation: thrust/moment <-> individual motor thrusts.

CAM rows are (f, tau_1, tau_2, tau_3) where, with gamma measured from +q2
towards +q1, tau_1 is the moment about b2 and tau_2 the moment about b1.
:func:`body_moment` reorders a CAM output into the (b1, b2, b3) vector the
Euler equation needs.
"""

from dataclasses import dataclass

import numpy as np

DET_EPS = 1e-6


class SingularAllocation(RuntimeError):
    """The CAM determinant fell below the singularity threshold."""


@dataclass(frozen=True)
class ControlInput:
    f: float
    tau: np.ndarray  # (b1, b2, b3) body moments, N m


@dataclass(frozen=True)
class MotorThrusts:
    f: np.ndarray              # (4,) N, after clamping
    saturated: bool = False
    residual: np.ndarray = None  # CAM @ f_clamped - requested, in CAM row order


@dataclass(frozen=True)
class AllocationMatrix:
    A: np.ndarray
    det: float

    @property
    def condition(self):
        return float(np.linalg.cond(self.A))


def build_cam(geom, c_tau):
    r, g = geom.r, geom.gamma
    A = np.array([
        np.ones(4),
        r * np.sin(g),
        -r * np.cos(g),
        [-c_tau, c_tau, -c_tau, c_tau],
    ])
    return AllocationMatrix(A, cam_determinant(geom, c_tau))


def cam_determinant(geom, c_tau):
    """Closed-form det(CAM); pairs (1,3) and (2,4) cancel through the yaw row."""
    r, g = geom.r, geom.gamma
    return 2.0 * c_tau * (
        -r[0] * r[1] * np.sin(g[0] - g[1])
        + r[0] * r[3] * np.sin(g[0] - g[3])
        + r[1] * r[2] * np.sin(g[2] - g[1])
        + r[2] * r[3] * np.sin(g[3] - g[2])
    )


def cam_vector(u):
    """ControlInput -> CAM right-hand side (f, tau_1, tau_2, tau_3)."""
    tau = np.asarray(u.tau, dtype=float)
    return np.array([u.f, tau[1], tau[0], tau[2]])


def body_moment(w):
    """CAM output (f, tau_1, tau_2, tau_3) -> (f, moment about b1, b2, b3)."""
    return float(w[0]), np.array([w[2], w[1], w[3]])


def achieved_input(cam, thrusts):
    f, tau = body_moment(cam.A @ np.asarray(thrusts, dtype=float))
    return ControlInput(f, tau)


def thrust_moments(geom, thrusts, c_tau):
    """First-principles body moment of the motor thrusts about the CG.

    Thrust acts along -b3; yaw drag alternates sign starting negative on motor 1.
    """
    thrusts = np.asarray(thrusts, dtype=float)
    forces = np.outer(thrusts, [0.0, 0.0, -1.0])
    tau = np.cross(geom.positions, forces).sum(axis=0)
    tau[2] += c_tau * np.dot([-1.0, 1.0, -1.0, 1.0], thrusts)
    return tau


def _solve4(A, b):
    """Gaussian elimination with partial pivoting for a 4x4 system."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        for i in range(k + 1, n):
            fac = A[i, k] / A[k, k]
            A[i, k:] -= fac * A[k, k:]
            b[i] -= fac * b[k]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - A[i, i + 1:] @ x[i + 1:]) / A[i, i]
    return x


def allocate(u, cam, limits, det_eps=DET_EPS, clamp=True):
    """Solve CAM f = (f, tau) for motor thrusts and clamp to the motor limits.

    Raises SingularAllocation if |det(CAM)| < det_eps.
    """
    if abs(cam.det) < det_eps:
        raise SingularAllocation(f"|det(CAM)| = {abs(cam.det):.3e} < {det_eps:.1e}")
    rhs = cam_vector(u)
    raw = _solve4(cam.A, rhs)
    if not clamp:
        return MotorThrusts(raw, False, cam.A @ raw - rhs)
    out = np.clip(raw, limits.f_min, limits.f_max)
    saturated = bool(np.any(out != raw))
    return MotorThrusts(out, saturated, cam.A @ out - rhs)
