"""Verification reports: inertia table check, controller comparison, CAM singularity sweep."""

import csv
from pathlib import Path

import numpy as np

from ..allocation import build_cam, cam_determinant
from ..morphology import MorphParams, arm_geometry, inertia_matrix, inertia_oracle
from .simulate import COL, SimulationError, run_scenario, write_csv

ENTRIES = ("J_xx", "J_yy", "J_zz", "J_xy", "J_yz", "J_zx")
# Reference lumped-model values, kg m^2, given at 1e-4 resolution.
LUMPED_REFERENCE = {
    (90.0, 90.0): (0.0037, 0.0037, 0.0067, 0.0000, 0.0000, 0.0000),
    (45.0, 45.0): (0.0023, 0.0050, 0.0062, 0.0000, 0.0000, -0.0002),
    (60.0, 30.0): (0.0022, 0.0050, 0.0062, -0.0001, 0.0002, 0.0001),
}
TABLE_TOL = 5e-5


def tensor_entries(J):
    return np.array([J[0, 0], J[1, 1], J[2, 2], J[0, 1], J[1, 2], J[2, 0]])


def oracle_sweep(params, n=100):
    """Max relative (Frobenius) difference closed form vs first principles on an n x n grid."""
    lo, hi = params.beta_eq - params.max_deflection, params.beta_eq + params.max_deflection
    grid = np.linspace(lo, hi, n)
    worst = 0.0
    for b1 in grid:
        for b2 in grid:
            Jo = inertia_oracle(b1, b2, params)
            rel = np.linalg.norm(inertia_matrix(b1, b2, params) - Jo) / np.linalg.norm(Jo)
            worst = max(worst, rel)
    return worst


def validate_inertia(params=None, tol=TABLE_TOL, grid=40):
    params = params or MorphParams()
    rows = []
    for (d1, d2), ref in LUMPED_REFERENCE.items():
        got = tensor_entries(inertia_matrix(np.radians(d1), np.radians(d2), params))
        for name, g, r in zip(ENTRIES, got, ref):
            rows.append({"beta1_deg": d1, "beta2_deg": d2, "entry": name, "computed": float(g),
                         "reference": r, "delta": float(g - r), "ok": abs(g - r) <= tol})
    return {"rows": rows, "oracle_max_rel": oracle_sweep(params, grid), "tol": tol}


def format_inertia_report(report):
    lines = [f"{'config':>12} {'entry':>5} {'computed':>10} {'reference':>10} {'delta':>10}"]
    for r in report["rows"]:
        cfg = f"({r['beta1_deg']:.0f},{r['beta2_deg']:.0f})"
        lines.append(f"{cfg:>12} {r['entry']:>5} {r['computed']:10.6f} {r['reference']:10.4f} "
                     f"{r['delta']:+10.2e} {'ok' if r['ok'] else 'FAIL'}")
    n_ok = sum(r["ok"] for r in report["rows"])
    lines.append(f"{n_ok}/{len(report['rows'])} entries within {report['tol']:.0e} kg m^2")
    lines.append(f"closed form vs first principles: max rel. error {report['oracle_max_rel']:.2e}")
    return "\n".join(lines)


def controller_metrics(result_or_error, x_d, tail=1.0):
    """Steady-state error (mean over the last ``tail`` s), max |e_R|, settling time."""
    if isinstance(result_or_error, SimulationError):
        return {"diverged": True, "diverged_at": result_or_error.t,
                "final_error": np.inf, "steady_state_error": np.inf,
                "max_attitude_error": np.inf, "settling_time": np.inf}
    log = result_or_error.log
    t = log[:, COL["t"]]
    err = np.linalg.norm(log[:, COL["x1"]:COL["x3"] + 1] - x_d, axis=1)
    e_R = np.linalg.norm(log[:, COL["eR1"]:COL["eR3"] + 1], axis=1)
    band = max(0.05, 0.02 * err[0])
    outside = np.where(err > band)[0]
    settle = 0.0 if len(outside) == 0 else float(t[outside[-1]])
    if len(outside) and outside[-1] == len(t) - 1:
        settle = np.inf
    return {"diverged": False, "diverged_at": None, "final_error": float(err[-1]),
            "steady_state_error": float(np.mean(err[t >= t[-1] - tail])),
            "max_attitude_error": float(np.max(e_R)), "settling_time": settle}


def compare_controllers(cfg, out_dir=None):
    """Run ``cfg`` with the adaptive and the baseline controller."""
    x_d = np.array(cfg.setpoint.x_d, float)
    runs, metrics = {}, {}
    for name in ("adaptive", "baseline"):
        try:
            runs[name] = run_scenario(cfg.with_controller(name))
        except SimulationError as exc:
            runs[name] = exc
        metrics[name] = controller_metrics(runs[name], x_d)
    if out_dir is not None:
        write_comparison(out_dir, cfg.name, runs, metrics, x_d)
    return runs, metrics


def write_comparison(out_dir, name, runs, metrics, x_d):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    logs = {}
    for ctrl, run in runs.items():
        logs[ctrl] = run.log
        write_csv(out / f"{name}_{ctrl}.csv", run.log)
    # per-axis position and attitude error traces, aligned on the shorter log
    n = min(len(v) for v in logs.values())
    with (out / f"{name}_errors.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + [f"{c}_{q}{i}" for c in logs for q in ("ex", "eR") for i in (1, 2, 3)])
        for k in range(n):
            row = [logs["adaptive"][k, COL["t"]]]
            for c in logs:
                row += list(logs[c][k, COL["x1"]:COL["x3"] + 1] - x_d)
                row += list(logs[c][k, COL["eR1"]:COL["eR3"] + 1])
            w.writerow([f"{v:.9g}" for v in row])
    with (out / f"{name}_metrics.csv").open("w", newline="") as fh:
        keys = ["final_error", "steady_state_error", "max_attitude_error", "settling_time",
                "diverged"]
        w = csv.writer(fh)
        w.writerow(["controller"] + keys)
        for c, m in metrics.items():
            w.writerow([c] + [m[k] for k in keys])


def format_metrics(metrics):
    keys = ["final_error", "steady_state_error", "max_attitude_error", "settling_time"]
    lines = [f"{'controller':>10} " + " ".join(f"{k:>19}" for k in keys)]
    for c, m in metrics.items():
        lines.append(f"{c:>10} " + " ".join(f"{m[k]:19.6g}" for k in keys))
    return "\n".join(lines)


def sweep_singularity(params, beta1_range, beta2_range, n1=61, n2=61, det_eps=1e-6):
    """det(CAM) and condition number over a (beta1, beta2) grid, in grid order.

    Ranges are in radians and must lie inside the spring deflection range.
    """
    lo, hi = params.beta_eq - params.max_deflection, params.beta_eq + params.max_deflection
    for a, b in (beta1_range, beta2_range):
        if a < lo - 1e-12 or b > hi + 1e-12 or a > b:
            raise ValueError("sweep range outside the hinge deflection range")
    cells = []
    for b1 in np.linspace(*beta1_range, n1):
        for b2 in np.linspace(*beta2_range, n2):
            geom = arm_geometry(b1, b2, params)
            det = cam_determinant(geom, params.c_tau)
            cond = np.linalg.cond(build_cam(geom, params.c_tau).A)
            cells.append((float(b1), float(b2), float(det), float(cond), abs(det) < det_eps))
    return cells


def write_sweep(path, cells):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["beta1_deg", "beta2_deg", "det", "cond", "singular"])
        for b1, b2, det, cond, sing in cells:
            w.writerow([f"{np.degrees(b1):.9g}", f"{np.degrees(b2):.9g}", f"{det:.9g}",
                        f"{cond:.9g}", int(sing)])
    return path
