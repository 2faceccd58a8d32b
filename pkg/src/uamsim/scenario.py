"""Domain types, CSV/TOML ingestion, validation and the synthetic generator.

Every other module consumes the frozen types defined here.  A ``Scenario`` is
immutable once loaded and may be shared freely between threads.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field, fields, replace
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib
import tomli_w

from .errors import (
    DanglingReference,
    InvalidDimension,
    InvariantViolation,
    MissingFile,
    SchemaViolation,
)
from .flight import METERS_PER_MILE, FlightProfile

SECONDS_PER_DAY = 86400.0
EARTH_RADIUS_MI = 3958.7613

FILE_NAMES = {
    "nodes": "nodes.csv",
    "links": "links.csv",
    "airports": "airports.csv",
    "aircraft": "aircraft.csv",
    "demand": "demand.csv",
}

HEADERS = {
    "nodes": ["id", "x", "y"],
    "links": ["from", "to", "length_m", "ffs_mps", "cap_vph", "alpha", "beta"],
    "airports": ["id", "node", "runways", "sep_s", "occupancy", "landside_cap_vph"],
    "aircraft": ["name", "seats", "range_mi", "min_runway_ft", "charge_s", "rot_s"],
    "demand": ["trip_id", "origin", "destination", "dep_s", "party"],
}


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Link:
    from_node: str
    to_node: str
    length: float
    free_flow_speed: float
    capacity: float
    alpha: float = 0.15
    beta: float = 4.0

    @property
    def free_flow_time(self):
        return self.length / self.free_flow_speed


@dataclass(frozen=True)
class GroundNetwork:
    nodes: tuple  # of (node_id, x, y)
    links: tuple  # of Link

    @cached_property
    def node_index(self):
        return {nid: i for i, (nid, _, _) in enumerate(self.nodes)}

    @property
    def n_nodes(self):
        return len(self.nodes)

    @cached_property
    def tails(self):
        idx = self.node_index
        return np.array([idx[l.from_node] for l in self.links], dtype=np.int64)

    @cached_property
    def heads(self):
        idx = self.node_index
        return np.array([idx[l.to_node] for l in self.links], dtype=np.int64)

    @cached_property
    def free_flow_times(self):
        return np.array([l.free_flow_time for l in self.links], dtype=float)

    @cached_property
    def capacities(self):
        return np.array([l.capacity for l in self.links], dtype=float)

    @cached_property
    def alphas(self):
        return np.array([l.alpha for l in self.links], dtype=float)

    @cached_property
    def betas(self):
        return np.array([l.beta for l in self.links], dtype=float)

    def coords(self, node_id):
        _, x, y = self.nodes[self.node_index[node_id]]
        return x, y


@dataclass(frozen=True)
class Airport:
    id: str
    anchor: str
    runways: tuple  # of (length_ft, width_ft)
    separation_interval: float
    landside_occupancy_factor: float
    landside_link_capacity: float
    hold_capacity: int | None = None  # None means unlimited

    @property
    def longest_runway(self):
        return max(length for length, _ in self.runways)


@dataclass(frozen=True)
class AircraftType:
    name: str
    seats: int
    range: float
    min_runway_length: float
    charging_time: float = 0.0
    runway_occupancy_time: float = 30.0


@dataclass(frozen=True, order=True)
class ODTrip:
    id: str
    origin: str
    destination: str
    departure_time: float
    party_size: int = 1


@dataclass
class ModePlan:
    trip: str
    mode: str  # "ground" | "uam"
    door_to_door_time: float
    baseline_driving_time: float
    origin_airport: str | None = None
    destination_airport: str | None = None
    hold_time: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    beta_promotion: float = 0.2
    promotion_index_threshold: int = 5
    convergence_tolerance: float = 0.005
    time_saving_threshold: float = 1200.0
    separation_default: float = 180.0
    assignment_iterations: int = 8
    random_seed: int = 0
    max_iterations: int = 100
    promotion_slack: float = 60.0
    promotion_selection: str = "gap"  # or "random"
    driving_baseline: str = "congested"  # or "freeflow"
    coordinates: str = "planar"  # or "lonlat"
    fleet_policy: str = "exact"  # or "substitution"
    asr: float = 60.0
    period_s: float = 900.0
    saving_thresholds: tuple = tuple(float(s) for s in range(0, 3601, 300))
    flight_profile: FlightProfile = field(default_factory=FlightProfile)
    hold_capacity: tuple = ()  # of (airport_id, int)

    def validate(self):
        if not 0 < self.beta_promotion <= 1:
            raise InvariantViolation(f"beta_promotion must be in (0, 1], got {self.beta_promotion}")
        if self.convergence_tolerance <= 0:
            raise InvariantViolation("convergence_tolerance must be positive")
        if self.assignment_iterations < 1:
            raise InvariantViolation("assignment_iterations must be >= 1")
        if self.max_iterations < 1:
            raise InvariantViolation("max_iterations must be >= 1")
        if self.separation_default < 90:
            raise InvariantViolation("separation_default must be >= 90 s")
        if self.period_s <= 0 or self.asr <= 0:
            raise InvariantViolation("period_s and asr must be positive")
        choices = {
            "promotion_selection": ("gap", "random"),
            "driving_baseline": ("congested", "freeflow"),
            "coordinates": ("planar", "lonlat"),
            "fleet_policy": ("exact", "substitution"),
        }
        for name, allowed in choices.items():
            if getattr(self, name) not in allowed:
                raise InvariantViolation(f"{name} must be one of {allowed}")
        return self

    def to_dict(self):
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "flight_profile":
                value = asdict(value)
            elif f.name == "hold_capacity":
                value = dict(value)
            elif f.name == "saving_thresholds":
                value = list(value)
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SchemaViolation("config", 0, sorted(unknown)[0], "unknown config key")
        if "flight_profile" in data:
            data["flight_profile"] = FlightProfile.from_mapping(data["flight_profile"])
        if "hold_capacity" in data:
            data["hold_capacity"] = tuple(sorted((str(k), int(v)) for k, v in dict(data["hold_capacity"]).items()))
        if "saving_thresholds" in data:
            data["saving_thresholds"] = tuple(float(s) for s in data["saving_thresholds"])
        for f in fields(cls):
            if f.name in data and f.type in ("float", "int"):
                kind = float if f.type == "float" else int
                data[f.name] = kind(data[f.name])
        return cls(**data).validate()


@dataclass(frozen=True)
class Scenario:
    network: GroundNetwork
    airports: tuple
    aircraft: tuple
    trips: tuple
    config: ScenarioConfig = field(default_factory=ScenarioConfig)

    @property
    def counts(self):
        return (self.network.n_nodes, len(self.airports), len(self.trips))

    @cached_property
    def airport_by_id(self):
        return {a.id: a for a in self.airports}

    @cached_property
    def trip_by_id(self):
        return {t.id: t for t in self.trips}

    def airport_distance(self, a, b):
        """Distance in miles between two airports (great-circle for lon/lat)."""
        return _distance_mi(self.network, self.airport_by_id[a].anchor,
                            self.airport_by_id[b].anchor, self.config.coordinates)

    @cached_property
    def airport_distance_matrix(self):
        ids = [a.id for a in self.airports]
        return np.array([[self.airport_distance(a, b) for b in ids] for a in ids], dtype=float)

    def with_config(self, config):
        return replace(self, config=config)


def _distance_mi(network, u, v, coordinates):
    x1, y1 = network.coords(u)
    x2, y2 = network.coords(v)
    if coordinates == "lonlat":
        lon1, lat1, lon2, lat2 = map(math.radians, (x1, y1, x2, y2))
        h = math.sin((lat2 - lat1) / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
        return 2 * EARTH_RADIUS_MI * math.asin(min(1.0, math.sqrt(h)))
    return math.hypot(x2 - x1, y2 - y1) / METERS_PER_MILE


# ---------------------------------------------------------------------------
# CSV ingestion


class _Rows:
    """Iterate a CSV file as dicts while remembering the file line number."""

    def __init__(self, path, kind):
        self.path = Path(path)
        self.kind = kind
        if not self.path.is_file():
            raise MissingFile(self.path)

    def __iter__(self):
        with open(self.path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in HEADERS[self.kind] if c not in header]
            if missing:
                raise SchemaViolation(self.path.name, 1, missing[0], "missing column")
            for row in reader:
                yield reader.line_num, row

    def field(self, line, row, column, kind=float, required=True):
        raw = row.get(column)
        raw = raw.strip() if raw is not None else ""
        if raw == "":
            if required:
                raise SchemaViolation(self.path.name, line, column, "empty value")
            return None
        try:
            value = kind(raw)
        except ValueError:
            raise SchemaViolation(self.path.name, line, column, f"cannot parse {raw!r} as {kind.__name__}") from None
        if kind is float and not math.isfinite(value):
            raise SchemaViolation(self.path.name, line, column, "value must be finite")
        return value


def _parse_int(raw):
    value = float(raw)
    if value != int(value):
        raise ValueError(raw)
    return int(value)


def parse_runways(text):
    """``"4502x149; 3998 x 98"`` -> ``((4502.0, 149.0), (3998.0, 98.0))``."""
    runways = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        length, width = part.lower().split("x")
        runways.append((float(length), float(width)))
    return tuple(runways)


def format_runways(runways):
    return ";".join(f"{_num(l)}x{_num(w)}" for l, w in runways)


def _num(x):
    if isinstance(x, float) and x.is_integer():
        return str(int(x)) if abs(x) < 1e15 else repr(x)
    return repr(x) if isinstance(x, float) else str(x)


def load_nodes(path):
    rows = _Rows(path, "nodes")
    nodes = []
    seen = set()
    for line, row in rows:
        nid = rows.field(line, row, "id", str)
        if nid in seen:
            raise SchemaViolation(rows.path.name, line, "id", f"duplicate node {nid!r}")
        seen.add(nid)
        nodes.append((nid, rows.field(line, row, "x"), rows.field(line, row, "y")))
    return tuple(nodes)


def load_links(path, node_ids):
    rows = _Rows(path, "links")
    links = []
    for line, row in rows:
        u = rows.field(line, row, "from", str)
        v = rows.field(line, row, "to", str)
        for ref in (u, v):
            if ref not in node_ids:
                raise DanglingReference(ref, f"{rows.path.name} line {line}")
        links.append(Link(
            u, v,
            rows.field(line, row, "length_m"),
            rows.field(line, row, "ffs_mps"),
            rows.field(line, row, "cap_vph"),
            rows.field(line, row, "alpha"),
            rows.field(line, row, "beta"),
        ))
    return tuple(links)


def load_airports(path, node_ids, config):
    rows = _Rows(path, "airports")
    holds = dict(config.hold_capacity)
    airports = []
    for line, row in rows:
        aid = rows.field(line, row, "id", str)
        node = rows.field(line, row, "node", str)
        if node not in node_ids:
            raise DanglingReference(node, f"{rows.path.name} line {line}")
        try:
            runways = parse_runways(row.get("runways") or "")
        except ValueError:
            raise SchemaViolation(rows.path.name, line, "runways", f"bad runway list {row.get('runways')!r}") from None
        sep = rows.field(line, row, "sep_s", required=False)
        airports.append(Airport(
            aid, node, runways,
            config.separation_default if sep is None else sep,
            rows.field(line, row, "occupancy"),
            rows.field(line, row, "landside_cap_vph"),
            holds.get(aid),
        ))
    return tuple(airports)


def load_aircraft(path):
    rows = _Rows(path, "aircraft")
    catalog = []
    for line, row in rows:
        catalog.append(AircraftType(
            rows.field(line, row, "name", str),
            rows.field(line, row, "seats", _parse_int),
            rows.field(line, row, "range_mi"),
            rows.field(line, row, "min_runway_ft"),
            rows.field(line, row, "charge_s"),
            rows.field(line, row, "rot_s"),
        ))
    return tuple(catalog)


def load_demand(path, node_ids):
    rows = _Rows(path, "demand")
    trips = []
    for line, row in rows:
        trip = ODTrip(
            rows.field(line, row, "trip_id", str),
            rows.field(line, row, "origin", str),
            rows.field(line, row, "destination", str),
            rows.field(line, row, "dep_s"),
            rows.field(line, row, "party", _parse_int),
        )
        for ref in (trip.origin, trip.destination):
            if ref not in node_ids:
                raise DanglingReference(ref, f"{rows.path.name} line {line}")
        trips.append(trip)
    return tuple(trips)


def resolve_paths(paths):
    """Accept a directory or a mapping of the five input kinds to files."""
    if isinstance(paths, (str, Path)):
        base = Path(paths)
        return {k: base / v for k, v in FILE_NAMES.items()}
    missing = set(FILE_NAMES) - set(paths)
    if missing:
        raise MissingFile(sorted(missing)[0])
    return {k: Path(paths[k]) for k in FILE_NAMES}


def load_scenario(paths, config=None):
    """Read, cross-reference and validate a scenario from its CSV inputs."""
    config = (config or ScenarioConfig()).validate()
    p = resolve_paths(paths)
    for path in p.values():
        if not path.is_file():
            raise MissingFile(path)
    nodes = load_nodes(p["nodes"])
    node_ids = {n[0] for n in nodes}
    links = load_links(p["links"], node_ids)
    airports = load_airports(p["airports"], node_ids, config)
    aircraft = load_aircraft(p["aircraft"])
    trips = load_demand(p["demand"], node_ids)
    scenario = Scenario(GroundNetwork(nodes, links), airports, aircraft, trips, config)
    validate_scenario(scenario)
    return scenario


def validate_scenario(scenario):
    net = scenario.network
    node_ids = set(net.node_index)
    for link in net.links:
        for ref in (link.from_node, link.to_node):
            if ref not in node_ids:
                raise DanglingReference(ref, "links")
        if not (link.length > 0 and link.free_flow_speed > 0 and link.capacity > 0):
            raise InvariantViolation(f"link {link.from_node}->{link.to_node}: length, speed and capacity must be positive")
        if link.alpha < 0 or link.beta < 1:
            raise InvariantViolation(f"link {link.from_node}->{link.to_node}: need alpha >= 0 and beta >= 1")

    seen = set()
    for a in scenario.airports:
        if a.id in seen:
            raise InvariantViolation(f"duplicate airport {a.id!r}")
        seen.add(a.id)
        if a.anchor not in node_ids:
            raise DanglingReference(a.anchor, f"airport {a.id}")
        if not a.runways:
            raise InvariantViolation(f"airport {a.id} has no runway")
        if any(l <= 0 or w <= 0 for l, w in a.runways):
            raise InvariantViolation(f"airport {a.id}: runway dimensions must be positive")
        if a.separation_interval < 90:
            raise InvariantViolation(f"airport {a.id}: separation interval below 90 s")
        if a.landside_occupancy_factor <= 0:
            raise InvariantViolation(f"airport {a.id}: occupancy factor must be positive")
        if a.landside_link_capacity < 0:
            raise InvariantViolation(f"airport {a.id}: negative landside capacity")
        if a.hold_capacity is not None and a.hold_capacity < 1:
            raise InvariantViolation(f"airport {a.id}: hold capacity must be >= 1")
    for aid, _ in scenario.config.hold_capacity:
        if aid not in seen:
            raise DanglingReference(aid, "config hold_capacity")

    names = set()
    for t in scenario.aircraft:
        if t.name in names:
            raise InvariantViolation(f"duplicate aircraft type {t.name!r}")
        names.add(t.name)
        if t.seats < 1 or t.range <= 0 or t.charging_time < 0 or t.runway_occupancy_time < 0 or t.min_runway_length < 0:
            raise InvariantViolation(f"aircraft {t.name}: invalid seats/range/charge/rot")

    trip_ids = set()
    for trip in scenario.trips:
        if trip.id in trip_ids:
            raise InvariantViolation(f"duplicate trip id {trip.id!r}")
        trip_ids.add(trip.id)
        for ref in (trip.origin, trip.destination):
            if ref not in node_ids:
                raise DanglingReference(ref, f"trip {trip.id}")
        if trip.origin == trip.destination:
            raise InvariantViolation(f"trip {trip.id}: origin equals destination")
        if not 0 <= trip.departure_time < SECONDS_PER_DAY:
            raise InvariantViolation(f"trip {trip.id}: departure time outside [0, 86400)")
        if trip.party_size < 1:
            raise InvariantViolation(f"trip {trip.id}: party size must be >= 1")

    referenced = {net.node_index[a.anchor] for a in scenario.airports}
    for trip in scenario.trips:
        referenced.add(net.node_index[trip.origin])
        referenced.add(net.node_index[trip.destination])
    if len(referenced) > 1:
        n = net.n_nodes
        graph = csr_matrix((np.ones(len(net.links)), (net.tails, net.heads)), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        if len({labels[i] for i in referenced}) > 1:
            raise InvariantViolation("network is not weakly connected over demand and airport nodes")
    return scenario


# ---------------------------------------------------------------------------
# config files


def load_config(path):
    """Parse a TOML config.

    Returns ``(config, source)`` where ``source`` is either a mapping of input
    files (from a ``[files]`` table, defaulting to the config's directory) or a
    ``[synthetic]`` parameter table.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path)
    try:
        data = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise SchemaViolation(path.name, 0, "", str(exc)) from None
    synthetic = data.pop("synthetic", None)
    files = data.pop("files", {})
    config = ScenarioConfig.from_dict(data)
    if synthetic is not None:
        return config, {"synthetic": dict(synthetic)}
    base = path.parent / files.pop("dir", ".")
    source = {k: base / files.get(k, v) for k, v in FILE_NAMES.items()}
    return config, source


def scenario_from_source(config, source):
    if "synthetic" in source:
        s = source["synthetic"]
        scenario = generate_synthetic_scenario(
            int(s.get("seed", config.random_seed)), int(s["n_nodes"]),
            int(s["n_airports"]), int(s["n_trips"]), config=config,
        )
        return scenario
    return load_scenario(source, config)


def dump_config(config):
    return tomli_w.dumps(config.to_dict())


# ---------------------------------------------------------------------------
# serialization


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(v) for v in row])
    return buf.getvalue()


def serialize_scenario(scenario):
    """Render a scenario to ``{file name: bytes}``; floats are written exactly."""
    net = scenario.network
    texts = {
        "nodes.csv": _csv_text(HEADERS["nodes"], net.nodes),
        "links.csv": _csv_text(HEADERS["links"], (
            (l.from_node, l.to_node, l.length, l.free_flow_speed, l.capacity, l.alpha, l.beta) for l in net.links)),
        "airports.csv": _csv_text(HEADERS["airports"], (
            (a.id, a.anchor, format_runways(a.runways), a.separation_interval,
             a.landside_occupancy_factor, a.landside_link_capacity) for a in scenario.airports)),
        "aircraft.csv": _csv_text(HEADERS["aircraft"], (
            (t.name, t.seats, t.range, t.min_runway_length, t.charging_time, t.runway_occupancy_time)
            for t in scenario.aircraft)),
        "demand.csv": _csv_text(HEADERS["demand"], (
            (t.id, t.origin, t.destination, t.departure_time, t.party_size) for t in scenario.trips)),
        "config.toml": dump_config(scenario.config),
    }
    return {k: v.encode() for k, v in texts.items()}


def write_scenario(scenario, directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, blob in serialize_scenario(scenario).items():
        (directory / name).write_bytes(blob)
    return directory


def read_scenario_dir(directory):
    directory = Path(directory)
    config, source = load_config(directory / "config.toml")
    return load_scenario(source, config)


# ---------------------------------------------------------------------------
# synthetic generator

DEFAULT_CATALOG = (
    # name, seats, range_mi, min_runway_ft, charge_s, rot_s
    AircraftType("Cessna172", 3, 600.0, 1700.0, 0.0, 30.0),
    AircraftType("Cessna208", 9, 1000.0, 2300.0, 0.0, 40.0),
    AircraftType("KingAir350", 11, 1700.0, 3300.0, 0.0, 40.0),
    AircraftType("SC7Skyvan", 19, 400.0, 2600.0, 0.0, 40.0),
    AircraftType("ERJ135", 37, 1700.0, 5500.0, 0.0, 45.0),
    AircraftType("ATR42", 48, 800.0, 3600.0, 0.0, 45.0),
    AircraftType("Dash8Q400", 78, 1200.0, 4600.0, 0.0, 45.0),
    AircraftType("CRJ900", 90, 1500.0, 6000.0, 0.0, 50.0),
)


def generate_synthetic_scenario(seed, n_nodes, n_airports, n_trips, config=None, catalog=DEFAULT_CATALOG):
    """Seeded grid network, airports on distinct nodes and morning-peaked demand.

    The result is a pure function of the arguments.
    """
    if n_nodes < 4 or n_airports < 2 or n_trips < 1:
        raise InvalidDimension(f"need n_nodes >= 4, n_airports >= 2, n_trips >= 1; got {n_nodes}, {n_airports}, {n_trips}")
    if n_airports > n_nodes:
        raise InvalidDimension("more airports than nodes")
    config = config or ScenarioConfig(random_seed=seed)
    rng = np.random.default_rng(seed)

    cols = math.ceil(math.sqrt(n_nodes))
    extent = 80_000.0
    spacing = extent / max(cols - 1, 1)
    jitter = rng.uniform(-0.15, 0.15, size=(n_nodes, 2)) * spacing
    nodes = tuple(
        (f"n{i}", round(float((i % cols) * spacing + jitter[i, 0]), 1),
         round(float((i // cols) * spacing + jitter[i, 1]), 1))
        for i in range(n_nodes)
    )

    # per-trip load is 3600/period_s vph; scale capacity so the peak bites
    demand_scale = max(1.0, n_trips / n_nodes)
    links = []
    for i in range(n_nodes):
        neighbours = []
        if (i + 1) % cols and i + 1 < n_nodes:
            neighbours.append(i + 1)
        if i + cols < n_nodes:
            neighbours.append(i + cols)
        for j in neighbours:
            (_, x1, y1), (_, x2, y2) = nodes[i], nodes[j]
            length = round(max(math.hypot(x2 - x1, y2 - y1), 1.0), 1)
            ffs = round(float(rng.uniform(13.0, 31.0)), 1)
            cap = round(float(rng.uniform(0.6, 1.4) * 40.0 * demand_scale + 200.0))
            links.append(Link(nodes[i][0], nodes[j][0], length, ffs, float(cap), 0.15, 4.0))
            links.append(Link(nodes[j][0], nodes[i][0], length, ffs, float(cap), 0.15, 4.0))

    sites = sorted(rng.choice(n_nodes, size=n_airports, replace=False).tolist())
    airports = []
    for k, site in enumerate(sites):
        n_rw = int(rng.integers(1, 4))
        runways = tuple(
            (float(rng.integers(2400, 6401)), float(rng.choice([60, 75, 100, 150])))
            for _ in range(n_rw)
        )
        hold = dict(config.hold_capacity).get(f"A{k + 1}")
        airports.append(Airport(
            f"A{k + 1}", nodes[site][0], runways, config.separation_default, 1.67,
            float(rng.integers(1500, 4001)), hold,
        ))

    width = len(str(n_trips))
    origins = rng.integers(0, n_nodes, size=n_trips)
    offsets = rng.integers(1, n_nodes, size=n_trips)
    dests = (origins + offsets) % n_nodes
    peaked = rng.random(n_trips) < 0.75
    dep = np.where(peaked, rng.normal(8 * 3600, 1.25 * 3600, n_trips), rng.uniform(0, 12 * 3600, n_trips))
    dep = np.clip(np.round(dep), 0, SECONDS_PER_DAY - 1)
    party = np.minimum(rng.geometric(0.55, n_trips), 8)
    big = rng.random(n_trips) < 0.01
    party = np.where(big, rng.integers(10, 121, n_trips), party)
    trips = tuple(
        ODTrip(f"t{i:0{width}d}", nodes[int(origins[i])][0], nodes[int(dests[i])][0],
               float(dep[i]), int(party[i]))
        for i in range(n_trips)
    )
    scenario = Scenario(GroundNetwork(nodes, tuple(links)), tuple(airports), tuple(catalog), trips, config)
    return validate_scenario(scenario)
