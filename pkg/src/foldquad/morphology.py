"""Hinge-angle dependent mass properties of the folding-arm quadrotor.

Frames: the q-frame has its origin at the geometric centre of the frame,
q1 through motors 1 and 3 (motor 1 at +l), q3 along the body b3 axis.
Arms 2 and 4 rotate in the q1-q2 plane; their hinge angles beta1, beta2 are
measured from the negative q1 axis, so beta = 90 deg is the unfolded plus
configuration and beta -> 0 folds both arms onto arm 3.
"""

from dataclasses import dataclass, field
from typing import NamedTuple
import warnings

import numpy as np

R_MIN = 1e-4  # m; below this an arm sits on the CG axis and the CAM degenerates


@dataclass(frozen=True)
class MorphParams:
    M: float = 0.710            # kg, centre sphere
    m: float = 0.095            # kg, lumped motor/propeller/arm mass
    R_s: float = 0.05           # m, sphere radius (D = 10 cm)
    l: float = 0.125            # m, arm length to motor
    h: float = -0.03            # m, q3 offset of motors 2 and 4
    k_tau: float = 0.21         # N m / rad
    beta_eq: float = np.pi / 2  # rad, spring rest angle
    c_tau: float = 0.016        # m, yaw drag / thrust ratio
    f_min: float = 0.0          # N per motor
    f_max: float = 6.0          # N per motor
    c_hinge: float = 0.02       # N m s / rad
    max_deflection: float = np.radians(120.0)
    guard_radius: float = 0.08  # m
    folded_width: float = 0.28  # m, guard-to-guard width at the fold stop

    def __post_init__(self):
        checks = {
            "M": self.M > 0, "m": self.m > 0, "l": self.l > 0, "R_s": self.R_s > 0,
            "k_tau": self.k_tau > 0, "beta_eq": 0 < self.beta_eq <= np.pi,
            "f_max > f_min >= 0": self.f_max > self.f_min >= 0,
            "c_hinge": self.c_hinge >= 0, "guard_radius": self.guard_radius > 0,
            "folded_width": self.folded_width > 2 * self.guard_radius,
        }
        bad = [k for k, ok in checks.items() if not ok]
        if bad:
            raise ValueError(f"invalid MorphParams: {', '.join(bad)}")

    @property
    def total_mass(self):
        return self.M + 4.0 * self.m

    @property
    def mass_ratio(self):
        return self.m / self.total_mass

    @property
    def arm_inertia(self):
        return self.m * self.l**2

    @property
    def beta_limits(self):
        """Hinge stops: the tighter of the spring deflection limit and the fold stop.

        The fold stop is the angle at which the guard-to-guard width across
        arms 2 and 4 equals ``folded_width``; it is mirrored about 90 deg.
        """
        s = (0.5 * self.folded_width - self.guard_radius) / self.l
        fold = np.arcsin(np.clip(s, 0.0, 1.0))
        lo = max(self.beta_eq - self.max_deflection, fold)
        hi = min(self.beta_eq + self.max_deflection, np.pi - fold)
        return lo, hi

    def width(self, beta1, beta2):
        """Guard-to-guard width across arms 2 and 4."""
        return self.l * (np.sin(beta1) + np.sin(beta2)) + 2.0 * self.guard_radius


class CenterOfGravity(NamedTuple):
    """CG in the q-frame, stored in (q2, q1, q3) order."""
    cg_y: float
    cg_x: float
    cg_z: float

    @property
    def xyz(self):
        return np.array([self.cg_x, self.cg_y, self.cg_z])


@dataclass(frozen=True)
class HingeState:
    beta: np.ndarray = field(default_factory=lambda: np.full(2, np.pi / 2))
    beta_dot: np.ndarray = field(default_factory=lambda: np.zeros(2))

    @classmethod
    def at(cls, beta1, beta2):
        return cls(np.array([beta1, beta2], dtype=float), np.zeros(2))


@dataclass(frozen=True)
class ArmGeometry:
    r: np.ndarray          # (4,) in-plane distance motor -> CG axis
    gamma: np.ndarray      # (4,) azimuth from +q2 towards +q1
    positions: np.ndarray  # (4, 3) motor positions relative to the CG
    cg: np.ndarray         # (3,) CG in the q-frame, (q1, q2, q3) order
    near_singular: bool = False


def center_of_gravity(beta1, beta2, params):
    C, l = params.mass_ratio, params.l
    return CenterOfGravity(
        -C * l * (np.sin(beta1) - np.sin(beta2)),
        -C * l * (np.cos(beta1) + np.cos(beta2)),
        2.0 * C * params.h,
    )


def motor_positions(beta1, beta2, params):
    """Motor positions in the q-frame, rows ordered motor 1..4."""
    l, h = params.l, params.h
    return np.array([
        [l, 0.0, 0.0],
        [-l * np.cos(beta1), -l * np.sin(beta1), h],
        [-l, 0.0, 0.0],
        [-l * np.cos(beta2), l * np.sin(beta2), h],
    ])


def inertia_matrix(beta1, beta2, params):
    """Closed-form inertia tensor about the CG (expanded lumped-mass terms).

    Off-diagonal entries are tensor elements, i.e. the negated products of
    inertia, so the result can be used directly in J @ Omega.
    """
    M, m, R, l, h = params.M, params.m, params.R_s, params.l, params.h
    cg_y, cg_x, cg_z = center_of_gravity(beta1, beta2, params)
    s1, s2, c1, c2 = np.sin(beta1), np.sin(beta2), np.cos(beta1), np.cos(beta2)
    sphere = 0.4 * M * R**2

    # arm 2 and arm 4 coordinates relative to the CG
    y2, x2 = -l * s1 - cg_y, -l * c1 - cg_x
    y4, x4 = l * s2 - cg_y, -l * c2 - cg_x
    dz = h - cg_z

    Jxx = (sphere + M * (cg_y**2 + cg_z**2) + 2 * m * (cg_y**2 + cg_z**2)
           + m * (y2**2 + dz**2) + m * (y4**2 + dz**2))
    Jyy = (sphere + M * (cg_x**2 + cg_z**2)
           + m * ((l - cg_x)**2 + cg_z**2) + m * ((-l - cg_x)**2 + cg_z**2)
           + m * (x2**2 + dz**2) + m * (x4**2 + dz**2))
    Jzz = (sphere + M * (cg_x**2 + cg_y**2)
           + m * (cg_y**2 + (l - cg_x)**2) + m * (cg_y**2 + (-l - cg_x)**2)
           + m * (y2**2 + x2**2) + m * (y4**2 + x4**2))
    Pxy = (M * cg_y * cg_x - m * cg_y * (l - cg_x) - m * cg_y * (-l - cg_x)
           + m * y2 * x2 + m * y4 * x4)
    Pyz = M * cg_y * cg_z + 2 * m * cg_y * cg_z + m * y2 * dz + m * y4 * dz
    Pzx = (M * cg_x * cg_z - m * (l - cg_x) * cg_z - m * (-l - cg_x) * cg_z
           + m * x2 * dz + m * x4 * dz)

    return np.array([[Jxx, -Pxy, -Pzx],
                     [-Pxy, Jyy, -Pyz],
                     [-Pzx, -Pyz, Jzz]])


def inertia_oracle(beta1, beta2, params):
    """Inertia tensor from first principles: point masses plus a solid sphere,
    shifted to the mass-weighted CG with the parallel-axis theorem."""
    pts = np.vstack([np.zeros(3), motor_positions(beta1, beta2, params)])
    masses = np.array([params.M] + [params.m] * 4)
    cg = masses @ pts / masses.sum()
    J = 0.4 * params.M * params.R_s**2 * np.eye(3)
    for mk, p in zip(masses, pts - cg):
        J += mk * (p @ p * np.eye(3) - np.outer(p, p))
    return J


def arm_geometry(beta1, beta2, params):
    """Per-motor lever arms about the CG, in the convention used by the CAM.

    gamma_i is the azimuth of motor i about the CG measured from +q2 towards
    +q1, so r sin(gamma) and r cos(gamma) are the q1 and q2 offsets.
    """
    cg = center_of_gravity(beta1, beta2, params).xyz
    pos = motor_positions(beta1, beta2, params) - cg
    r = np.hypot(pos[:, 0], pos[:, 1])
    gamma = np.arctan2(pos[:, 0], pos[:, 1])
    near = bool(np.any(r < R_MIN))
    if near:
        warnings.warn(f"arm within {R_MIN} m of the CG axis; allocation near-singular",
                      RuntimeWarning, stacklevel=2)
    return ArmGeometry(r=r, gamma=gamma, positions=pos, cg=cg, near_singular=near)


def _hinge_rhs(beta, beta_dot, tau_ext, params):
    acc = (-params.k_tau * (beta - params.beta_eq) - params.c_hinge * beta_dot + tau_ext)
    return beta_dot, acc / params.arm_inertia


def hinge_step(state, external_torques, dt, params):
    """Advance both spring hinges by ``dt`` (RK4), then apply the stops.

    A hinge that reaches a stop is pinned there with its rate zeroed if it
    is still moving into the stop.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    tau = np.asarray(external_torques, dtype=float)
    b, w = np.asarray(state.beta, dtype=float), np.asarray(state.beta_dot, dtype=float)
    k1b, k1w = _hinge_rhs(b, w, tau, params)
    k2b, k2w = _hinge_rhs(b + 0.5 * dt * k1b, w + 0.5 * dt * k1w, tau, params)
    k3b, k3w = _hinge_rhs(b + 0.5 * dt * k2b, w + 0.5 * dt * k2w, tau, params)
    k4b, k4w = _hinge_rhs(b + dt * k3b, w + dt * k3w, tau, params)
    b = b + dt / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b)
    w = w + dt / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w)

    lo, hi = params.beta_limits
    at_lo, at_hi = b <= lo, b >= hi
    b = np.clip(b, lo, hi)
    w = np.where((at_lo & (w < 0)) | (at_hi & (w > 0)), 0.0, w)
    return HingeState(b, w)
