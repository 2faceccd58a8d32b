"""End-to-end run: baseline drive, equilibrium, flight tasks, fleet sizing."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import reports
from .equilibrium import run_to_equilibrium
from .fleet import generate_tasks, size_combined
from .flight import flight_time
from .ground import RoadTimes, assign, path_times


def reposition_fn(scenario):
    """Empty repositioning flight time in seconds between two airports."""
    profile = scenario.config.flight_profile
    cache = {}

    def f(a, b):
        if (a, b) not in cache:
            cache[a, b] = 60.0 * flight_time(scenario.airport_distance(a, b), profile)
        return cache[a, b]

    return f


def charge_map(catalog):
    return {t.name: t.charging_time for t in catalog}


def seat_map(catalog):
    return {t.name: t.seats for t in catalog}


@dataclass
class PipelineResult:
    scenario: object
    report: object
    tasks: list
    fleet: object
    timings: dict = field(default_factory=dict)

    def outputs(self, link_volumes=False):
        """Every output file as ``{name: text}``."""
        rep, sc = self.report, self.scenario
        out = {
            "equilibrium_log.csv": reports.equilibrium_log_csv(rep.log),
            "thresholds.csv": reports.thresholds_csv(rep.thresholds),
            "report.csv": reports.report_csv(rep),
            "summary.csv": reports.summary_csv(rep, self.fleet),
            "tasks.csv": reports.tasks_csv(self.tasks),
            "fleet_report.csv": reports.fleet_report_csv(self.fleet),
            "rotations.csv": reports.rotations_csv(self.fleet),
            "departures.csv": reports.departures_csv(rep.departures),
            "capacity_compare.csv": reports.capacity_csv(sc.airports, sc.aircraft, sc.config.asr),
        }
        if link_volumes and rep.ground_field is not None:
            out["link_volumes.csv"] = reports.link_volumes_csv(rep.ground_field)
        return out


def size_fleet(scenario, tasks, threads=1):
    cfg = scenario.config
    return size_combined(tasks, reposition_fn(scenario), charge_map(scenario.aircraft),
                         cfg.fleet_policy, seat_map(scenario.aircraft), threads)


def run_pipeline(scenario, threads=1):
    cfg = scenario.config
    timings = {}

    t0 = time.perf_counter()
    baseline = assign(scenario.network, scenario.trips, cfg.assignment_iterations, cfg.period_s, threads) \
        if scenario.trips else None
    if cfg.driving_baseline == "freeflow":
        t_driving = path_times(RoadTimes.free_flow(scenario.network, cfg.period_s), scenario.trips)
    else:
        t_driving = dict(baseline.trip_times) if baseline else {}
    timings["baseline"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    report = run_to_equilibrium(scenario, threads, t_driving=t_driving, baseline_field=baseline)
    timings["equilibrium"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    tasks = generate_tasks(report.itineraries, scenario.aircraft, scenario.airport_by_id, report.departures)
    timings["tasks"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    fleet = size_fleet(scenario, tasks, threads)
    timings["fleet"] = time.perf_counter() - t0
    return PipelineResult(scenario, report, tasks, fleet, timings)
