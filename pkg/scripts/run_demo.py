"""Run the bundled 25-node demo end to end and print the headline numbers.

    python scripts/run_demo.py [--out out] [--threads 1]
"""

import argparse
from pathlib import Path

from uamsim import reports
from uamsim.cli import DEMO_CONFIG, main


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="out")
    p.add_argument("--threads", type=int, default=1)
    return p.parse_args()


if __name__ == "__main__":
    args = parse_args()
    root = Path(args.out)
    before = set(root.iterdir()) if root.exists() else set()
    code = main(["run", "--config", str(DEMO_CONFIG), "--out", args.out, "--threads", str(args.threads)])
    after = set(root.iterdir()) - before
    out = after.pop() if after else max(root.iterdir(), key=lambda p: p.stat().st_mtime)

    summary = reports.load_summary(out / "summary.csv")
    for key in ("n_uam", "n_ground", "n_benefited", "iterations", "fleet_total"):
        print(f"{key:>14}: {summary[key]:g}")
    print("\nthreshold_s  n_benefited  median_driving_s")
    for thr, n, med in reports.load_thresholds(out / "thresholds.csv"):
        print(f"{thr:>11g}  {n:>11d}  {med:>16.1f}")
    print("\ncapacity per airport (pax/h)")
    for aid, land, air, binding, actype, note in reports.load_capacity(out / "capacity_compare.csv"):
        print(f"  {aid}: landside {land:g}, airside {air if air is not None else 'n/a'} ({actype}) -> {binding or note}")
    raise SystemExit(code)
