"""Fly through the gap and the passageway and summarise the interaction.

Prints the summary metrics and a coarse trace of position, hinge angles,
yaw and admittance yaw while any guard touches a wall.
"""

import argparse
from pathlib import Path

import numpy as np

from foldquad.harness import COL, load_config, run_scenario, write_csv

ROOT = Path(__file__).resolve().parents[1]


def trace(log, every=50):
    contact = log[:, COL["contact1"]:COL["contact4"] + 1]
    rows = np.nonzero(contact.any(axis=1))[0][::every]
    print(f"{'t':>6} {'x':>6} {'y':>6} {'z':>6} {'beta1':>6} {'beta2':>6} {'psi':>6} {'psi_d':>6}  guards")
    for k in rows:
        r = log[k]
        deg = np.degrees([r[COL["beta1"]], r[COL["beta2"]], r[COL["psi"]], r[COL["psi_d"]]])
        touching = "".join(str(i + 1) for i in np.nonzero(contact[k])[0])
        print(f"{r[COL['t']]:6.2f} {r[COL['x1']]:6.3f} {r[COL['x2']]:6.3f} {r[COL['x3']]:6.3f} "
              + " ".join(f"{d:6.1f}" for d in deg) + f"  {touching}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("scenarios", nargs="*", default=["gap", "passageway"])
    ap.add_argument("--out", default="out/traverse")
    args = ap.parse_args()
    for name in args.scenarios:
        res = run_scenario(load_config(ROOT / "configs" / f"{name}.yaml"))
        write_csv(Path(args.out) / f"{name}.csv", res.log)
        print(f"== {name}")
        for k, v in res.summary.items():
            print(f"  {k}: {v}")
        trace(res.log)
