"""det(CAM) over the hinge range, printed as a coarse character map.

'#' marks cells below the singularity threshold, '.' cells with small
margin (|det| < 10x threshold).
"""

import argparse
from pathlib import Path

import numpy as np

from foldquad.harness import load_config
from foldquad.harness.reports import sweep_singularity, write_sweep

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", default=ROOT / "configs" / "sweep.yaml")
    ap.add_argument("--out", default="out/sweep")
    args = ap.parse_args()
    cfg = load_config(args.config)
    sw, eps = cfg.sweep, cfg.integration.det_eps
    cells = sweep_singularity(cfg.morph, sw.beta1_range, sw.beta2_range, sw.n1, sw.n2, eps)
    write_sweep(Path(args.out) / "singularity.csv", cells)
    det = np.array([c[2] for c in cells]).reshape(sw.n1, sw.n2)
    b2 = np.degrees(np.linspace(*sw.beta2_range, sw.n2))
    print(f"rows: beta1, columns: beta2 from {b2[0]:.0f} to {b2[-1]:.0f} deg")
    for b1, row in zip(np.degrees(np.linspace(*sw.beta1_range, sw.n1)), det):
        marks = np.where(np.abs(row) < eps, "#", np.where(np.abs(row) < 10 * eps, ".", " "))
        print(f"{b1:7.1f} |" + "".join(marks) + "|")
    print(f"min |det| {np.abs(det).min():.2e}, max {np.abs(det).max():.2e}")
