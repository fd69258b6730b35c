"""Rigid-body equations of motion with hinge-dependent inertia.

Inertial frame: e3 points down, so gravity is +g e3 and thrust acts along
-R e3.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .allocation import ControlInput
from .morphology import HingeState, hinge_step, inertia_matrix
from .rotation import cross, expm_so3, integrate_rotation

G = 9.81
E3 = np.array([0.0, 0.0, 1.0])
DIVERGENCE_BOUND = 1e6


class Diverged(RuntimeError):
    def __init__(self, t, what):
        super().__init__(f"state diverged at t = {t:.4f} s ({what})")
        self.t = t


@dataclass(frozen=True)
class VehicleState:
    x: np.ndarray = field(default_factory=lambda: np.zeros(3))
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))
    R: np.ndarray = field(default_factory=lambda: np.eye(3))
    Omega: np.ndarray = field(default_factory=lambda: np.zeros(3))
    hinges: HingeState = field(default_factory=HingeState)
    t: float = 0.0


def state_derivative(s, u, J, params, external=None):
    """(x_dot, v_dot, Omega_dot) for control input ``u``.

    ``external`` is an optional (force in the inertial frame, moment in the
    body frame) pair, e.g. from wall contact.
    """
    m_t = params.total_mass
    v_dot = G * E3 - u.f / m_t * (s.R @ E3)
    tau = np.asarray(u.tau, dtype=float)
    if external is not None:
        v_dot = v_dot + external[0] / m_t
        tau = tau + external[1]
    Om = s.Omega
    Omega_dot = np.linalg.solve(J, tau - cross(Om, J @ Om))
    return s.v, v_dot, Omega_dot


def _dexpinv(theta, w):
    # right-trivialised inverse dexp, truncated after the second bracket (enough for order 4)
    c = cross(theta, w)
    return w + 0.5 * c + cross(theta, c) / 12.0


def inertia_rate(hinges, params, eps=1e-6):
    b1, b2 = hinges.beta
    d1, d2 = hinges.beta_dot
    return (inertia_matrix(b1 + eps * d1, b2 + eps * d2, params)
            - inertia_matrix(b1, b2, params)) / eps


def step(s, u, hinge_torques, dt, params, external=None, include_inertia_rate=False,
         lock_hinges=False, bound=DIVERGENCE_BOUND):
    """Advance the vehicle by ``dt``.

    Translation and body rates use classical RK4; attitude uses the
    Munthe-Kaas form of the same tableau so R stays on SO(3). J is frozen at
    the hinge angles at the start of the step. ``u`` is either a
    ControlInput held over the step or a callable ``state -> ControlInput``
    re-evaluated at each stage. ``lock_hinges`` holds the hinge state fixed
    (rigid morphology).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    J = inertia_matrix(*s.hinges.beta, params)
    if include_inertia_rate:
        Jdot_Om = inertia_rate(s.hinges, params) @ s.Omega
        ext_F = np.zeros(3) if external is None else external[0]
        ext_M = np.zeros(3) if external is None else external[1]
        external = (ext_F, ext_M - Jdot_Om)
    policy = u if callable(u) else (lambda _state: u)

    def stage(theta, x, v, Om, tau):
        st = replace(s, x=x, v=v, R=s.R @ expm_so3(theta), Omega=Om, t=s.t + tau)
        xd, vd, wd = state_derivative(st, policy(st), J, params, external)
        return xd, vd, wd, _dexpinv(theta, Om)

    z3 = np.zeros(3)
    k1 = stage(z3, s.x, s.v, s.Omega, 0.0)
    k2 = stage(0.5 * dt * k1[3], s.x + 0.5 * dt * k1[0], s.v + 0.5 * dt * k1[1],
               s.Omega + 0.5 * dt * k1[2], 0.5 * dt)
    k3 = stage(0.5 * dt * k2[3], s.x + 0.5 * dt * k2[0], s.v + 0.5 * dt * k2[1],
               s.Omega + 0.5 * dt * k2[2], 0.5 * dt)
    k4 = stage(dt * k3[3], s.x + dt * k3[0], s.v + dt * k3[1], s.Omega + dt * k3[2], dt)
    comb = [dt / 6.0 * (a + 2 * b + 2 * c + d) for a, b, c, d in zip(k1, k2, k3, k4)]

    new = VehicleState(
        x=s.x + comb[0],
        v=s.v + comb[1],
        R=integrate_rotation(s.R, comb[3] / dt, dt),
        Omega=s.Omega + comb[2],
        hinges=s.hinges if lock_hinges else hinge_step(s.hinges, hinge_torques, dt, params),
        t=s.t + dt,
    )
    check_bounded(new, bound)
    return new


def check_bounded(s, bound=DIVERGENCE_BOUND):
    for name in ("x", "v", "Omega"):
        val = getattr(s, name)
        if not np.all(np.isfinite(val)) or np.linalg.norm(val) > bound:
            raise Diverged(s.t, name)
    if not np.all(np.isfinite(s.R)):
        raise Diverged(s.t, "R")


def rotational_energy(Omega, J):
    return 0.5 * Omega @ J @ Omega


def hover_input(params):
    return ControlInput(params.total_mass * G, np.zeros(3))
