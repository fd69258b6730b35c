"""Closed-loop simulation: yaw admittance -> position -> attitude -> allocation -> plant."""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..allocation import ControlInput, SingularAllocation, achieved_input, allocate, build_cam
from ..control import (AdmittanceState, DegenerateHeading, PositionLoopState, Setpoint,
                       attitude_control_adaptive, attitude_control_baseline, admittance_update,
                       heading, lyapunov_value, nominal_inertia, position_control)
from ..dynamics import Diverged, VehicleState, step
from ..environment import contact_forces, effective_width, scenario_geometry
from ..morphology import HingeState, arm_geometry, inertia_matrix
from ..rotation import attitude_error, axis_angle, rate_error, wrap_angle, yaw_of

# a traversal counts as successful if the vehicle never strays further than
# this from the commanded lateral position
LATERAL_BOUND = 0.5

COLUMNS = tuple(
    ["t", "x1", "x2", "x3", "v1", "v2", "v3"]
    + [f"R{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    + ["Omega1", "Omega2", "Omega3", "beta1", "beta2", "psi", "psi_d",
       "f", "tau1", "tau2", "tau3", "f1", "f2", "f3", "f4",
       "eR1", "eR2", "eR3", "eOmega1", "eOmega2", "eOmega3", "V",
       "contact1", "contact2", "contact3", "contact4"]
)
COL = {name: i for i, name in enumerate(COLUMNS)}


class SimulationError(RuntimeError):
    """Diverged or SingularAllocation during a run; carries the partial log."""

    def __init__(self, cause, t, log):
        super().__init__(f"{type(cause).__name__} at t = {t:.4f} s: {cause}")
        self.cause = cause
        self.t = t
        self.log = log


@dataclass
class RunResult:
    config: object
    log: np.ndarray                    # one row per control step, columns COLUMNS
    summary: dict = field(default_factory=dict)

    def column(self, name):
        return self.log[:, COL[name]]


def initial_state(cfg):
    ini = cfg.initial
    return VehicleState(
        x=np.array(ini.x, float), v=np.array(ini.v, float),
        R=axis_angle([0, 0, 1], ini.yaw), Omega=np.array(ini.Omega, float),
        hinges=HingeState.at(ini.beta1, ini.beta2),
    )


def _row(s, psi, psi_d, u, thrusts, e_R, e_W, V, depth):
    return np.concatenate([
        [s.t], s.x, s.v, s.R.ravel(), s.Omega, s.hinges.beta, [psi, psi_d, u.f], u.tau,
        thrusts, e_R, e_W, [V], (depth > 0).astype(float),
    ])


def run_scenario(cfg):
    """Run one scenario. Raises SimulationError wrapping Diverged/SingularAllocation."""
    p, it = cfg.morph, cfg.integration
    dt = it.dt
    n_steps = int(round(it.duration / dt))
    inner_every = max(1, int(round(1.0 / (it.control_rate * dt))))
    outer_every = max(1, int(round(1.0 / (it.outer_rate * dt))))
    walls = scenario_geometry(cfg.environment.kind, cfg.environment.dims)

    J0 = nominal_inertia(p)
    geom_nominal = arm_geometry(p.beta_eq, p.beta_eq, p)
    cam_nominal = build_cam(geom_nominal, p.c_tau)
    baseline = cfg.controller == "baseline"

    s = initial_state(cfg)
    x_d = np.array(cfg.setpoint.x_d, float)
    adm = AdmittanceState(cfg.setpoint.yaw_d, 0.0, cfg.admittance.M, cfg.admittance.D,
                          cfg.admittance.K)
    loop = PositionLoopState()
    psi = yaw_of(s.R)
    R_d = axis_angle([0, 0, 1], adm.psi_d)
    zero = np.zeros(3)
    thrusts = np.zeros(4)
    u = ControlInput(0.0, zero)
    rows = []
    stats = {"min_width": np.inf, "contact_time": 0.0, "min_width_time": None}

    for k in range(n_steps + 1):
        try:
            beta = s.hinges.beta
            geom = arm_geometry(*beta, p)
            cam = build_cam(geom, p.c_tau)
            psi = adm.psi_d + wrap_angle(yaw_of(s.R) - adm.psi_d)
            if cfg.admittance.enabled and k % outer_every == 0 and k > 0:
                adm = admittance_update(adm, psi, outer_every * dt)
            b1_d = heading(adm.psi_d) if cfg.admittance.enabled else heading(cfg.setpoint.yaw_d)

            if k % inner_every == 0:
                sp = Setpoint(x_d=x_d, b1_d=b1_d)
                try:
                    cmd, loop = position_control(s, sp, cfg.position, loop,
                                                 inner_every * dt, p.total_mass)
                    R_d = cmd.R_d
                    f_cmd = cmd.f
                except DegenerateHeading:
                    f_cmd = u.f  # hold previous R_d for this step
                if baseline:
                    tau = attitude_control_baseline(s, R_d, zero, zero, J0, cfg.attitude)
                    cam_ctrl = cam_nominal
                else:
                    J = inertia_matrix(*beta, p)
                    tau = attitude_control_adaptive(s, R_d, zero, zero, J, cfg.attitude)
                    cam_ctrl = cam
                mt = allocate(ControlInput(f_cmd, tau), cam_ctrl, p, det_eps=it.det_eps)
                thrusts = mt.f

            u = achieved_input(cam, thrusts)
            contact = contact_forces(s, geom, walls, p, cfg.environment.k_wall,
                                     cfg.environment.c_wall)

            if k % inner_every == 0:
                e_R = attitude_error(s.R, R_d)
                e_W = rate_error(s.Omega, s.R, R_d, zero)
                V = lyapunov_value(s, R_d, zero, cfg.attitude)
                rows.append(_row(s, psi, adm.psi_d, u, thrusts, e_R, e_W, V, contact.depth))
            if contact.in_contact:
                stats["contact_time"] += dt
                w = effective_width(s, geom, contact, p)
                if w < stats["min_width"]:
                    stats["min_width"], stats["min_width_time"] = w, s.t
            if k == n_steps:
                break
            s = step(s, u, contact.hinge_torques, dt, p, external=contact.wrench,
                     include_inertia_rate=it.include_inertia_rate,
                     lock_hinges=cfg.lock_hinges, bound=it.divergence_bound)
        except (Diverged, SingularAllocation) as exc:
            log = np.array(rows) if rows else np.zeros((0, len(COLUMNS)))
            raise SimulationError(exc, s.t, log) from exc

    log = np.array(rows)
    result = RunResult(cfg, log)
    result.summary = summarize(result, walls, stats)
    return result


def summarize(result, walls, stats):
    cfg, log = result.config, result.log
    p = cfg.morph
    x = log[:, COL["x1"]:COL["x3"] + 1]
    x_d = np.array(cfg.setpoint.x_d, float)
    err = np.linalg.norm(x - x_d, axis=1)
    z0 = cfg.initial.x[2]
    beta = log[:, [COL["beta1"], COL["beta2"]]]
    summary = {
        "final_position_error": float(err[-1]),
        "max_altitude_loss": float(max(0.0, np.max(x[:, 2] - z0))),
        "max_altitude_excursion": float(np.max(np.abs(x[:, 2] - z0))),
        "max_fold": float(np.max(np.abs(p.beta_eq - beta))),
        "min_beta": float(np.min(beta)),
        "contact_time": stats["contact_time"],
        "min_effective_width": float(stats["min_width"]),
    }
    if walls:
        exit_x = max(w.point[0] + w.s_extent[1] * w.tangent[0] for w in walls)
        crossed = bool(np.any(x[:, 0] > exit_x))
        lateral = float(np.max(np.abs(x[:, 1] - x_d[1])))
        summary["max_lateral_deviation"] = lateral
        summary["traversal_success"] = crossed and lateral < LATERAL_BOUND
    else:
        summary["traversal_success"] = True
    return summary


def write_csv(path, log):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for row in log:
            w.writerow([f"{v:.9g}" for v in row])
    return path


def read_csv(path):
    with Path(path).open() as fh:
        header = next(csv.reader(fh))
        if tuple(header) != COLUMNS:
            raise ValueError("unexpected column layout")
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
