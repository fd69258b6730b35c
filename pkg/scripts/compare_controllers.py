"""Adaptive vs fixed-inertia attitude control with both arms held at 30 deg.

Writes per-controller logs, a joint error trace and a metrics table to --out.
"""

import argparse
from pathlib import Path

from foldquad.harness import compare_controllers, load_config
from foldquad.harness.reports import format_metrics

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", default=ROOT / "configs" / "folded_tracking.yaml")
    ap.add_argument("--out", default="out/compare")
    args = ap.parse_args()
    _, metrics = compare_controllers(load_config(args.config), Path(args.out))
    print(format_metrics(metrics))
