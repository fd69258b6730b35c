"""Cascaded controller: P-PID position loop, geometric attitude law, yaw admittance.

Controllers are pure functions; loop memory (PID integrator, admittance
filter) is passed in and returned explicitly.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .allocation import ControlInput
from .dynamics import E3, G, VehicleState, step
from .morphology import HingeState, inertia_matrix
from .rotation import attitude_error, cross, error_function, hat, rate_error

HEADING_EPS = 1e-6


class DegenerateHeading(ValueError):
    """Desired thrust axis is parallel to the desired heading."""


@dataclass(frozen=True)
class AttitudeGains:
    k_R: float = 400.0
    k_Omega: float = 40.0
    k_Omega_d: float = 0.0

    def __post_init__(self):
        if not (self.k_R > 0 and self.k_Omega > 0 and self.k_Omega_d >= 0):
            raise ValueError("attitude gains must satisfy k_R > 0, k_Omega > 0, k_Omega_d >= 0")

    # gains of the reduced error dynamics e_Omega_dot = -k'_R e_R - k'_Omega e_Omega
    @property
    def k_R_eff(self):
        return self.k_R / (1.0 + self.k_Omega_d)

    @property
    def k_Omega_eff(self):
        return self.k_Omega / (1.0 + self.k_Omega_d)


@dataclass(frozen=True)
class PositionGains:
    k_pos: float = 2.0
    kp_vel: float = 4.0
    ki_vel: float = 0.5
    kd_vel: float = 0.1
    v_max: float = 2.0     # m/s, clamp on the velocity setpoint
    a_max: float = 6.0     # m/s^2, clamp on the commanded acceleration
    i_max: float = 4.0     # m/s^2, clamp on the integral contribution


@dataclass(frozen=True)
class Setpoint:
    x_d: np.ndarray
    v_d: np.ndarray = field(default_factory=lambda: np.zeros(3))
    a_d: np.ndarray = field(default_factory=lambda: np.zeros(3))
    b1_d: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))
    Omega_d: np.ndarray = field(default_factory=lambda: np.zeros(3))
    Omega_dot_d: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if abs(np.linalg.norm(self.b1_d) - 1.0) > 1e-9:
            raise ValueError("b1_d must be a unit vector")


@dataclass(frozen=True)
class PositionLoopState:
    integral: np.ndarray = field(default_factory=lambda: np.zeros(3))
    prev_v: np.ndarray = None


@dataclass(frozen=True)
class PositionCommand:
    f: float
    R_d: np.ndarray
    Omega_d: np.ndarray
    Omega_dot_d: np.ndarray
    F_d: np.ndarray


@dataclass(frozen=True)
class AdmittanceState:
    psi_d: float = 0.0
    psi_d_dot: float = 0.0
    M: float = 0.01
    D: float = 0.2
    K: float = 1.0

    def __post_init__(self):
        if not (self.M > 0 and self.D > 0 and self.K > 0):
            raise ValueError("admittance parameters must be positive")


def heading(psi):
    return np.array([np.cos(psi), np.sin(psi), 0.0])


def desired_attitude(F_d, b1_d):
    """R_d = [b1 b2 b3] with b3 along F_d and b1 as close to b1_d as possible."""
    b3 = F_d / np.linalg.norm(F_d)
    c = cross(b3, b1_d)
    n = np.linalg.norm(c)
    if n < HEADING_EPS:
        raise DegenerateHeading(f"|b3_d x b1_d| = {n:.2e}")
    b2 = c / n
    b1 = cross(b2, b3)
    return np.column_stack([b1, b2, b3])


def _clip_norm(v, vmax):
    n = np.linalg.norm(v)
    return v if n <= vmax else v * (vmax / n)


def position_control(s, sp, gains, loop, dt, m_t):
    """Outer P loop on position, inner PID on velocity.

    Returns (PositionCommand, new PositionLoopState). Raises
    DegenerateHeading when the thrust axis lines up with b1_d.
    """
    v_sp = _clip_norm(sp.v_d + gains.k_pos * (sp.x_d - s.x), gains.v_max)
    e_v = v_sp - s.v
    integral = loop.integral + e_v * dt
    integral = _clip_norm(gains.ki_vel * integral, gains.i_max) / gains.ki_vel \
        if gains.ki_vel > 0 else integral
    # derivative on measurement, so setpoint jumps do not kick
    dv = np.zeros(3) if loop.prev_v is None else -(s.v - loop.prev_v) / dt
    a_cmd = sp.a_d + gains.kp_vel * e_v + gains.ki_vel * integral + gains.kd_vel * dv
    a_cmd = _clip_norm(a_cmd, gains.a_max)

    F_d = m_t * (G * E3 - a_cmd)
    f = max(0.0, float(F_d @ (s.R @ E3)))
    R_d = desired_attitude(F_d, sp.b1_d)
    cmd = PositionCommand(f, R_d, np.asarray(sp.Omega_d, float),
                          np.asarray(sp.Omega_dot_d, float), F_d)
    return cmd, PositionLoopState(integral, s.v.copy())


def _feedforward(s, R_d, Omega_d, Omega_dot_d):
    RtRd = s.R.T @ R_d
    return -hat(s.Omega) @ (RtRd @ Omega_d) + RtRd @ Omega_dot_d


def attitude_control_adaptive(s, R_d, Omega_d, Omega_dot_d, J, gains):
    """Geometric attitude law evaluated with the current inertia J.

    The e_Omega_dot term is resolved analytically: under this law the
    closed loop gives (1 + k_Omega_d) e_Omega_dot = -k_R e_R - k_Omega e_Omega.
    """
    e_R = attitude_error(s.R, R_d)
    e_W = rate_error(s.Omega, s.R, R_d, Omega_d)
    pd = -gains.k_R * e_R - gains.k_Omega * e_W
    e_W_dot = pd / (1.0 + gains.k_Omega_d)
    zeta = _feedforward(s, R_d, Omega_d, Omega_dot_d)
    return J @ (pd - gains.k_Omega_d * e_W_dot + zeta) + cross(s.Omega, J @ s.Omega)


def attitude_control_baseline(s, R_d, Omega_d, Omega_dot_d, J0, gains):
    """The same law with a frozen nominal inertia J0."""
    return attitude_control_adaptive(s, R_d, Omega_d, Omega_dot_d, J0, gains)


def nominal_inertia(params):
    return inertia_matrix(params.beta_eq, params.beta_eq, params)


def _admittance_rhs(y, psi, a):
    return np.array([y[1], (psi - a.D * y[1] - a.K * y[0]) / a.M])


def admittance_update(a, psi, dt):
    """One RK4 step of M psi_d'' + D psi_d' + K psi_d = psi with psi held."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    y = np.array([a.psi_d, a.psi_d_dot])
    k1 = _admittance_rhs(y, psi, a)
    k2 = _admittance_rhs(y + 0.5 * dt * k1, psi, a)
    k3 = _admittance_rhs(y + 0.5 * dt * k2, psi, a)
    k4 = _admittance_rhs(y + dt * k3, psi, a)
    y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return replace(a, psi_d=float(y[0]), psi_d_dot=float(y[1]))


def lyapunov_value(s, R_d, Omega_d, gains):
    e_W = rate_error(s.Omega, s.R, R_d, Omega_d)
    return 0.5 * e_W @ e_W + gains.k_R_eff * error_function(s.R, R_d)


def attitude_closed_loop(R0, R_d, J_beta, params, gains, duration, dt=1e-3, Omega0=None):
    """Attitude-only closed loop with a constant R_d and zero desired rates.

    The control law is re-evaluated at every integrator stage (no
    zero-order hold), so the run tracks the continuous-time closed loop.
    Hinges are locked at ``J_beta``. Returns arrays t, V, |e_R|, |e_Omega|.
    """
    J = inertia_matrix(*J_beta, params)
    zero = np.zeros(3)

    def policy(st):
        return ControlInput(0.0, attitude_control_adaptive(st, R_d, zero, zero, J, gains))

    s = VehicleState(R=R0, Omega=zero if Omega0 is None else np.asarray(Omega0, float),
                     hinges=HingeState.at(*J_beta))
    n = int(round(duration / dt))
    t, V, eR, eW = (np.zeros(n + 1) for _ in range(4))
    for k in range(n + 1):
        if k:
            s = step(s, policy, np.zeros(2), dt, params, lock_hinges=True)
        t[k] = s.t
        V[k] = lyapunov_value(s, R_d, zero, gains)
        eR[k] = np.linalg.norm(attitude_error(s.R, R_d))
        eW[k] = np.linalg.norm(rate_error(s.Omega, s.R, R_d, zero))
    return t, V, eR, eW
