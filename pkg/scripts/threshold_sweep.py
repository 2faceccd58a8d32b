"""Benefited-trip count against the time-saving threshold over several seeds.

Writes one row per (seed, threshold) to a CSV so the curve can be plotted
elsewhere.

    python scripts/threshold_sweep.py --nodes 100 --airports 4 --trips 2000 --seeds 0 1 2
"""

import argparse
import csv
import sys
import time
from dataclasses import replace

import numpy as np

from uamsim import ScenarioConfig, generate_synthetic_scenario, run_to_equilibrium


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--airports", type=int, default=4)
    p.add_argument("--trips", type=int, default=2000)
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    p.add_argument("--max-minutes", type=float, default=60.0)
    p.add_argument("--step-minutes", type=float, default=5.0)
    p.add_argument("--out", default="threshold_sweep.csv")
    return p.parse_args()


if __name__ == "__main__":
    args = parse_args()
    thresholds = tuple(float(m * 60) for m in np.arange(0, args.max_minutes + 1e-9, args.step_minutes))
    config = replace(ScenarioConfig(), saving_thresholds=thresholds)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seed", "threshold_s", "n_benefited", "median_driving_s", "n_uam", "converged"])
        for seed in args.seeds:
            t0 = time.perf_counter()
            s = generate_synthetic_scenario(seed, args.nodes, args.airports, args.trips, replace(config, random_seed=seed))
            rep = run_to_equilibrium(s)
            for thr, n, med in rep.thresholds:
                w.writerow([seed, thr, n, med, len(rep.uam), int(rep.converged)])
            counts = " ".join(str(n) for _, n, _ in rep.thresholds)
            print(f"seed {seed}: {len(rep.uam)} uam trips, {rep.iterations} iterations, "
                  f"{time.perf_counter() - t0:.1f} s; counts {counts}", file=sys.stderr)
    print(args.out)
