"""Minimum fleet size and solve time as demand grows.

For each trip count the scenario is run to equilibrium, then the fleet is
sized per aircraft type.  Output is a CSV with one row per (trips, type).

    python scripts/fleet_scaling.py --trips 250 500 1000 2000 --nodes 144 --airports 4
"""

import argparse
import csv
import time

from uamsim import generate_synthetic_scenario
from uamsim.pipeline import run_pipeline


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trips", type=int, nargs="+", default=[250, 500, 1000, 2000])
    p.add_argument("--nodes", type=int, default=144)
    p.add_argument("--airports", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="fleet_scaling.csv")
    return p.parse_args()


if __name__ == "__main__":
    args = parse_args()
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n_trips", "n_uam", "type", "n_tasks", "fleet_size", "avg_occupancy", "fleet_solve_s"])
        for n in args.trips:
            t0 = time.perf_counter()
            result = run_pipeline(generate_synthetic_scenario(args.seed, args.nodes, args.airports, n))
            fleet = result.fleet
            for k in sorted(fleet.per_type):
                w.writerow([n, len(result.report.uam), k, fleet.n_tasks[k], fleet.per_type[k],
                            fleet.occupancy[k], result.timings["fleet"]])
            print(f"{n} trips: {len(result.report.uam)} by air, {len(result.tasks)} tasks, fleet {fleet.total} "
                  f"(fleet stage {result.timings['fleet']:.3f} s, total {time.perf_counter() - t0:.1f} s)")
    print(args.out)
