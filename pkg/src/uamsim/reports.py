"""CSV writers and loaders for every pipeline output.

Writers return text so the caller can hash it before it touches disk; every
file written here can be read back by the matching ``load_*`` function.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import MissingFile, NoSuitableAircraft, SchemaViolation
from .fleet import FlightTask
from .flight import airside_passenger_capacity, best_airside_type, landside_passenger_capacity
from .scenario import _num

COLUMNS = {
    "equilibrium_log": ["iter", "n_uam", "n_ground", "switched", "median_uam_saving_s"],
    "thresholds": ["threshold_s", "n_benefited", "median_driving_s"],
    "report": ["trip", "mode", "door_to_door_s", "baseline_driving_s", "origin_airport",
               "destination_airport", "hold_s"],
    "summary": ["metric", "value"],
    "tasks": ["task", "origin", "dest", "start_s", "end_s", "type", "pax"],
    "fleet_report": ["type", "fleet_size", "n_tasks", "avg_occupancy"],
    "rotations": ["aircraft_id", "type", "tasks", "occupancy"],
    "departures": ["trip", "airport", "runway", "ready_s", "depart_s", "hold_s", "aircraft",
                   "flight", "pax", "destination", "arrival_runway", "arrival_s"],
    "capacity_compare": ["airport", "landside_pax_per_h", "airside_pax_per_h", "binding",
                         "airside_type", "note"],
    "link_volumes": ["link", "period", "volume", "congested_s"],
}


def csv_text(kind, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS[kind])
    for row in rows:
        w.writerow(["" if v is None else _num(v) for v in row])
    return buf.getvalue()


def read_rows(path, kind):
    """Yield ``(line, row)`` pairs after checking the header."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in COLUMNS[kind] if c not in (reader.fieldnames or [])]
        if missing:
            raise SchemaViolation(path.name, 1, missing[0], "missing column")
        for row in reader:
            yield reader.line_num, row


def _get(path, line, row, column, kind=float, optional=False):
    raw = (row.get(column) or "").strip()
    if raw == "":
        if optional:
            return None
        raise SchemaViolation(Path(path).name, line, column, "empty value")
    try:
        value = kind(raw)
    except ValueError:
        raise SchemaViolation(Path(path).name, line, column, f"cannot parse {raw!r}") from None
    if kind is float and math.isnan(value) and not optional:
        raise SchemaViolation(Path(path).name, line, column, "value is NaN")
    return value


def _int(raw):
    value = float(raw)
    if value != int(value):
        raise ValueError(raw)
    return int(value)


# ---------------------------------------------------------------------------
# equilibrium outputs


def equilibrium_log_csv(records):
    return csv_text("equilibrium_log", (
        (r.iteration, r.n_uam, r.n_ground, r.switched, r.median_uam_saving_s) for r in records))


def thresholds_csv(curve):
    return csv_text("thresholds", curve)


def report_csv(report):
    rows = []
    for tid, p in report.plans.items():
        rows.append((tid, p.mode, p.door_to_door_time, p.baseline_driving_time,
                     p.origin_airport, p.destination_airport, p.hold_time))
    return csv_text("report", rows)


def summary_csv(report, fleet=None):
    rows = [
        ("n_uam", len(report.uam)),
        ("n_ground", len(report.ground)),
        ("n_benefited", report.n_benefited),
        ("median_driving_uam_s", report.median_driving_uam_s),
        ("benefit_uam_s", report.benefit_s["uam"]),
        ("benefit_ground_s", report.benefit_s["ground"]),
        ("iterations", report.iterations),
        ("converged", int(report.converged)),
    ]
    if fleet is not None:
        rows.append(("fleet_total", fleet.total))
    return csv_text("summary", rows)


def departures_csv(events):
    return csv_text("departures", (
        (d.trip, d.airport, d.runway, d.ready_s, d.depart_s, d.hold_s, d.aircraft,
         d.flight, d.passengers, d.destination, d.arrival_runway, d.arrival_s)
        for d in sorted(events, key=lambda d: (d.depart_s, d.airport, d.runway, d.trip, d.flight))
    ))


def link_volumes_csv(field):
    return csv_text("link_volumes", field.volume_rows())


def load_equilibrium_log(path):
    return [
        (_get(path, ln, r, "iter", _int), _get(path, ln, r, "n_uam", _int), _get(path, ln, r, "n_ground", _int),
         _get(path, ln, r, "switched", _int), _get(path, ln, r, "median_uam_saving_s", optional=True))
        for ln, r in read_rows(path, "equilibrium_log")
    ]


def load_thresholds(path):
    return [
        (_get(path, ln, r, "threshold_s"), _get(path, ln, r, "n_benefited", _int),
         _get(path, ln, r, "median_driving_s", optional=True))
        for ln, r in read_rows(path, "thresholds")
    ]


def load_report(path):
    out = []
    for ln, r in read_rows(path, "report"):
        mode = _get(path, ln, r, "mode", str)
        if mode not in ("uam", "ground"):
            raise SchemaViolation(Path(path).name, ln, "mode", f"unknown mode {mode!r}")
        out.append((_get(path, ln, r, "trip", str), mode, _get(path, ln, r, "door_to_door_s"),
                    _get(path, ln, r, "baseline_driving_s"), (r["origin_airport"] or None),
                    (r["destination_airport"] or None), _get(path, ln, r, "hold_s", optional=True)))
    return out


def load_summary(path):
    return {r["metric"]: float(r["value"]) for _, r in read_rows(path, "summary")}


@dataclass(frozen=True)
class DepartureRow:
    trip: str
    airport: str
    runway: int
    ready_s: float
    depart_s: float
    hold_s: float
    aircraft: str
    flight: int
    pax: int
    destination: str
    arrival_runway: int
    arrival_s: float


def load_departures(path):
    out = []
    for ln, r in read_rows(path, "departures"):
        g = lambda c, k=float: _get(path, ln, r, c, k)  # noqa: E731
        out.append(DepartureRow(g("trip", str), g("airport", str), g("runway", _int), g("ready_s"),
                                g("depart_s"), g("hold_s"), g("aircraft", str), g("flight", _int),
                                g("pax", _int), g("destination", str), g("arrival_runway", _int),
                                g("arrival_s")))
    return out


def load_link_volumes(path):
    return [
        (_get(path, ln, r, "link", _int), _get(path, ln, r, "period", _int), _get(path, ln, r, "volume"),
         _get(path, ln, r, "congested_s"))
        for ln, r in read_rows(path, "link_volumes")
    ]


# ---------------------------------------------------------------------------
# fleet outputs


def tasks_csv(tasks):
    return csv_text("tasks", (
        (t.id, t.origin_airport, t.destination_airport, t.start_time, t.end_time, t.aircraft, t.passengers)
        for t in tasks))


def load_tasks(path, seats=None):
    """Read tasks.csv; ``seats`` (type -> seats) enables the capacity check."""
    tasks, seen = [], set()
    name = Path(path).name
    for ln, r in read_rows(path, "tasks"):
        tid = _get(path, ln, r, "task", str)
        if tid in seen:
            raise SchemaViolation(name, ln, "task", f"duplicate task {tid!r}")
        seen.add(tid)
        actype = _get(path, ln, r, "type", str)
        if seats is not None and actype not in seats:
            raise SchemaViolation(name, ln, "type", f"unknown aircraft type {actype!r}")
        start, end = _get(path, ln, r, "start_s"), _get(path, ln, r, "end_s")
        for col, v in (("start_s", start), ("end_s", end)):
            if not math.isfinite(v):
                raise SchemaViolation(name, ln, col, "time must be finite")
        pax = _get(path, ln, r, "pax", _int)
        if pax < 1:
            raise SchemaViolation(name, ln, "pax", "passengers must be >= 1")
        try:
            tasks.append(FlightTask(tid, _get(path, ln, r, "origin", str), _get(path, ln, r, "dest", str),
                                    start, end, actype, pax, seats[actype] if seats else None))
        except ValueError as exc:
            raise SchemaViolation(name, ln, "task", str(exc)) from None
    return tasks


def fleet_report_csv(fleet):
    return csv_text("fleet_report", (
        (k, fleet.per_type[k], fleet.n_tasks[k], fleet.occupancy[k]) for k in sorted(fleet.per_type)))


def rotation_rows(fleet):
    """(aircraft_id, type, task chain, occupied/offered seats) for every aircraft."""
    rows = []
    n = 0
    for key in sorted(fleet.solutions):
        sol = fleet.solutions[key]
        by_id = {t.id: t for t in sol.graph.tasks}
        for chain in sol.rotations:
            tasks = [by_id[t] for t in chain]
            lead = max(tasks, key=lambda t: (t.seats or 0, t.aircraft))
            offered = (lead.seats or 0) * len(tasks)
            occ = sum(t.passengers for t in tasks) / offered if offered else float("nan")
            n += 1
            rows.append((f"ac{n:04d}", lead.aircraft, ";".join(chain), occ))
    return rows


def rotations_csv(fleet):
    return csv_text("rotations", rotation_rows(fleet))


def load_fleet_report(path):
    return [
        (_get(path, ln, r, "type", str), _get(path, ln, r, "fleet_size", _int), _get(path, ln, r, "n_tasks", _int),
         _get(path, ln, r, "avg_occupancy", optional=True))
        for ln, r in read_rows(path, "fleet_report")
    ]


def load_rotations(path):
    return [
        (_get(path, ln, r, "aircraft_id", str), _get(path, ln, r, "type", str),
         tuple(_get(path, ln, r, "tasks", str).split(";")), _get(path, ln, r, "occupancy", optional=True))
        for ln, r in read_rows(path, "rotations")
    ]


# ---------------------------------------------------------------------------
# capacity comparison


def binding_side(landside, airside):
    if landside < airside:
        return "landside"
    if airside < landside:
        return "airside"
    return "tie"


def capacity_rows(airports, catalog, asr):
    """Per-airport landside vs airside passengers/hour and the binding side."""
    rows = []
    for a in sorted(airports, key=lambda a: a.id):
        land = landside_passenger_capacity(a)
        try:
            air = airside_passenger_capacity(a, catalog, asr)
            actype = best_airside_type(a.longest_runway, catalog, asr).name
            rows.append((a.id, land, air, binding_side(land, air), actype, ""))
        except NoSuitableAircraft:
            rows.append((a.id, land, None, "", "", "no_suitable_aircraft"))
    return rows


def capacity_csv(airports, catalog, asr):
    return csv_text("capacity_compare", capacity_rows(airports, catalog, asr))


def load_capacity(path):
    return [
        (_get(path, ln, r, "airport", str), _get(path, ln, r, "landside_pax_per_h"),
         _get(path, ln, r, "airside_pax_per_h", optional=True), r["binding"], r["airside_type"], r["note"])
        for ln, r in read_rows(path, "capacity_compare")
    ]
