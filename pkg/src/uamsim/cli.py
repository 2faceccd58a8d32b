"""Command-line entry point.

    uamsim run --config scenario.toml [--out out] [--seed N] [--threads N] [--paper-compat]
    uamsim capacity --config scenario.toml
    uamsim fleet-only tasks.csv [--config scenario.toml]
    uamsim synth --nodes 25 --airports 2 --trips 100 --out demo/

Results go to ``<out>/<hash>/`` where the hash covers the effective config and
the input file digests, so different inputs never overwrite each other.  The
log level comes from ``UAMSIM_LOG_LEVEL``.
"""

from __future__ import annotations

import argparse
import datetime as dt
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import replace
from importlib import metadata
from pathlib import Path

import numpy as np
import scipy

from . import reports
from .errors import ScenarioError, UamSimError
from .fleet import size_combined
from .pipeline import charge_map, reposition_fn, run_pipeline, seat_map
from .scenario import (
    ScenarioConfig,
    generate_synthetic_scenario,
    load_config,
    scenario_from_source,
    write_scenario,
)

log = logging.getLogger("uamsim")

EXIT_OK, EXIT_INGEST, EXIT_NONCONVERGENCE = 0, 1, 2
DEMO_CONFIG = Path(__file__).parent / "demo" / "config.toml"


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def sha256(data):
    return hashlib.sha256(data if isinstance(data, bytes) else data.encode()).hexdigest()


def paper_compat(config):
    """Stated climb/descent distances and the 180 s operational separation."""
    profile = replace(config.flight_profile, recompute_distances=False,
                      stated_climb_distance=12.79, stated_descent_distance=23.02)
    return replace(config, flight_profile=profile, separation_default=180.0)


def effective_config(args):
    if args.config is None:
        config, source = ScenarioConfig(), None
    else:
        config, source = load_config(args.config)
    if args.seed is not None:
        config = replace(config, random_seed=args.seed)
        if source and "synthetic" in source:
            source = {"synthetic": {**source["synthetic"], "seed": args.seed}}
    if args.paper_compat:
        config = paper_compat(config)
    return config.validate(), source


def input_digests(source):
    if source is None:
        return {}
    if "synthetic" in source:
        return {"synthetic": sha256(json.dumps(source["synthetic"], sort_keys=True))}
    return {Path(p).name: sha256(Path(p).read_bytes()) for k, p in sorted(source.items()) if Path(p).is_file()}


def run_hash(verb, config, digests, extra=None):
    blob = json.dumps({"verb": verb, "config": config.to_dict(), "inputs": digests, "extra": extra},
                      sort_keys=True, default=str)
    return sha256(blob)


def write_outputs(out_dir, files, manifest):
    out_dir.mkdir(parents=True, exist_ok=True)
    digests = {}
    for name in sorted(files):
        data = files[name].encode()
        (out_dir / name).write_bytes(data)
        digests[name] = sha256(data)
    manifest["outputs"] = digests
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return digests


def base_manifest(config_hash, config, digests, threads):
    return {
        "config_hash": config_hash,
        "config": config.to_dict(),
        "inputs": digests,
        "started": dt.datetime.now(dt.timezone.utc).isoformat(),
        "versions": {"uamsim": _version(), "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": sys.version.split()[0]},
        "threads": threads,
        "warnings": [],
    }


# ---------------------------------------------------------------------------
# verbs


def cmd_run(args):
    config, source = effective_config(args)
    if source is None:
        raise ScenarioError("run needs --config")
    t0 = time.perf_counter()
    scenario = scenario_from_source(config, source)
    load_s = time.perf_counter() - t0
    digests = input_digests(source)
    h = run_hash("run", config, digests)
    manifest = base_manifest(h, config, digests, args.threads)

    result = run_pipeline(scenario, args.threads)
    files = result.outputs(link_volumes=args.link_volumes)
    manifest["stages"] = {"load": load_s, **result.timings}
    manifest["warnings"] = list(result.report.warnings)
    manifest["converged"] = result.report.converged
    manifest["finished"] = dt.datetime.now(dt.timezone.utc).isoformat()
    out_dir = Path(args.out) / h[:12]
    write_outputs(out_dir, files, manifest)
    print(out_dir)
    if not result.report.converged:
        log.warning("equilibrium hit the iteration cap; outputs written to %s", out_dir)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def cmd_capacity(args):
    config, source = effective_config(args)
    if source is None:
        raise ScenarioError("capacity needs --config")
    scenario = scenario_from_source(config, source)
    digests = input_digests(source)
    h = run_hash("capacity", config, digests)
    manifest = base_manifest(h, config, digests, args.threads)
    text = reports.capacity_csv(scenario.airports, scenario.aircraft, config.asr)
    manifest["finished"] = dt.datetime.now(dt.timezone.utc).isoformat()
    out_dir = Path(args.out) / h[:12]
    write_outputs(out_dir, {"capacity_compare.csv": text}, manifest)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_fleet_only(args):
    config, source = effective_config(args)
    digests = {Path(args.tasks).name: sha256(Path(args.tasks).read_bytes())} if Path(args.tasks).is_file() else {}
    if source is not None:
        scenario = scenario_from_source(config, source)
        digests.update(input_digests(source))
        seats = seat_map(scenario.aircraft)
        tasks = reports.load_tasks(args.tasks, seats)
        reposition, charge = reposition_fn(scenario), charge_map(scenario.aircraft)
    else:
        # no airport geometry: only same-airport turnarounds are possible
        seats = None
        tasks = reports.load_tasks(args.tasks)
        reposition, charge = None, {}
    h = run_hash("fleet-only", config, digests)
    manifest = base_manifest(h, config, digests, args.threads)
    t0 = time.perf_counter()
    fleet = size_combined(tasks, reposition, charge, config.fleet_policy, seats, args.threads)
    manifest["stages"] = {"fleet": time.perf_counter() - t0}
    manifest["finished"] = dt.datetime.now(dt.timezone.utc).isoformat()
    files = {"fleet_report.csv": reports.fleet_report_csv(fleet), "rotations.csv": reports.rotations_csv(fleet)}
    out_dir = Path(args.out) / h[:12]
    write_outputs(out_dir, files, manifest)
    print(out_dir)
    print(f"fleet_size {fleet.total}")
    return EXIT_OK


def cmd_synth(args):
    config, _ = effective_config(args)
    seed = config.random_seed if args.seed is None else args.seed
    scenario = generate_synthetic_scenario(seed, args.nodes, args.airports, args.trips, config)
    out = write_scenario(scenario, args.out)
    print(out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario TOML file")
    common.add_argument("--out", default="out", help="output root (default: out)")
    common.add_argument("--seed", type=int, help="override the random seed")
    common.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    common.add_argument("--paper-compat", action="store_true",
                        help="stated 12.79/23.02 mi climb/descent distances and 180 s separation")

    parser = argparse.ArgumentParser(prog="uamsim", description="UAM mode-split equilibrium and fleet sizing")
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("run", parents=[common], help="full pipeline")
    p.add_argument("--link-volumes", action="store_true", help="also write link_volumes.csv")
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("capacity", parents=[common], help="landside vs airside capacity per airport")
    p.set_defaults(func=cmd_capacity)
    p = sub.add_parser("fleet-only", parents=[common], help="fleet sizing from a tasks.csv")
    p.add_argument("tasks", help="tasks.csv path")
    p.set_defaults(func=cmd_fleet_only)
    p = sub.add_parser("synth", parents=[common], help="write a synthetic scenario directory")
    p.add_argument("--nodes", type=int, default=25)
    p.add_argument("--airports", type=int, default=2)
    p.add_argument("--trips", type=int, default=100)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    logging.basicConfig(level=os.environ.get("UAMSIM_LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INGEST
    except UamSimError as exc:
        log.error("%s", exc)
        return EXIT_INGEST


if __name__ == "__main__":
    sys.exit(main())
