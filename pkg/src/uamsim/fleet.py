"""Flight tasks and minimum fleet size on a time-expanded graph.

Phase 1 turns UAM itineraries into typed flight tasks.  Phase 2 builds the
time-expanded network (a start and end node per task plus a global source and
sink) and solves a min-cost flow where only source edges cost 1, task edges
carry exactly one unit and every edge has capacity 1.  The source outflow is
the number of aircraft; following the unit flows from the source gives each
aircraft's rotation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dispatch import feasible_types, select_aircraft
from .errors import Infeasible
from .mcf import min_cost_flow

SOURCE, SINK = 0, 1
TASK, SOURCE_EDGE, SINK_EDGE, TRANSITION = "task", "source", "sink", "transition"


@dataclass(frozen=True)
class FlightTask:
    id: str
    origin_airport: str
    destination_airport: str
    start_time: float
    end_time: float
    aircraft: str
    passengers: int
    seats: int | None = None

    def __post_init__(self):
        if not self.end_time > self.start_time:
            raise ValueError(f"task {self.id}: end must be after start")
        if self.origin_airport == self.destination_airport:
            raise ValueError(f"task {self.id}: origin equals destination")
        if self.seats is not None and self.passengers > self.seats:
            raise ValueError(f"task {self.id}: {self.passengers} passengers exceed {self.seats} seats")


def generate_tasks(itineraries, catalog, airports, departures=None):
    """One task per aircraft movement implied by the final UAM itineraries.

    ``airports`` maps airport id to :class:`Airport`.  When the departure log
    is given its take-off times are used, otherwise the itinerary's.
    """
    if not catalog:
        raise ValueError("aircraft catalog is empty")
    takeoffs = {}
    for dep in departures or ():
        takeoffs[dep.trip, dep.flight] = dep.depart_s
    tasks = []
    for it in sorted(itineraries, key=lambda it: it.trip):
        a, b = airports[it.origin_airport], airports[it.destination_airport]
        types = feasible_types(catalog, it.distance_mi, min(a.longest_runway, b.longest_runway))
        actype, pax = select_aircraft(sum(it.passengers), types)
        for k, n in enumerate(pax):
            start = takeoffs.get((it.trip, k), it.takeoff_time)
            tid = it.trip if len(pax) == 1 else f"{it.trip}.{k}"
            tasks.append(FlightTask(tid, it.origin_airport, it.destination_airport,
                                    start, start + it.flight_time, actype.name, n, actype.seats))
    return tasks


@dataclass
class TimeExpandedGraph:
    tasks: list
    tails: np.ndarray
    heads: np.ndarray
    kinds: list
    costs: np.ndarray
    capacity: np.ndarray
    lower: np.ndarray
    supply_n: int

    @property
    def n_nodes(self):
        return 2 + 2 * len(self.tasks)

    @property
    def n_edges(self):
        return len(self.tails)

    def node_label(self, i):
        if i == SOURCE:
            return "source"
        if i == SINK:
            return "sink"
        task = self.tasks[(i - 2) // 2]
        return f"{task.id}:{'start' if i % 2 == 0 else 'end'}"

    def edges_of(self, kind):
        return [k for k, kd in enumerate(self.kinds) if kd == kind]

    def node_balance(self):
        """Required inflow minus outflow per node (source -N, sink +N, else 0)."""
        n = np.zeros(self.n_nodes, dtype=np.int64)
        n[SOURCE] = -self.supply_n
        n[SINK] = self.supply_n
        return n


def start_node(k):
    return 2 + 2 * k


def end_node(k):
    return 3 + 2 * k


def turnaround_matrix(tasks, reposition_s, charge_s):
    """Seconds needed between the end of task i and the start of task j."""
    airports = sorted({t.origin_airport for t in tasks} | {t.destination_airport for t in tasks})
    pos = {a: i for i, a in enumerate(airports)}
    repo = np.array([[0.0 if a == b else reposition_s(a, b) for b in airports] for a in airports]).reshape(len(airports), len(airports))
    dest = np.array([pos[t.destination_airport] for t in tasks], dtype=np.int64)
    orig = np.array([pos[t.origin_airport] for t in tasks], dtype=np.int64)
    charge = np.array([charge_s.get(t.aircraft, 0.0) for t in tasks])
    return repo[dest][:, orig] + charge[:, None]


def build_graph(tasks, reposition_s=None, charge_s=None, policy="exact", seats=None):
    """Time-expanded graph over ``tasks``.

    ``reposition_s(a, b)`` gives the empty repositioning flight time in seconds
    between distinct airports (infinite forbids the move); same-airport
    turnarounds cost only the charging time ``charge_s[type]``.  Under the
    ``exact`` policy transitions join tasks of the same aircraft type; under
    ``substitution`` task j may follow task i when j's type has no more seats
    than i's, so a larger aircraft can fly a smaller type's task.
    """
    tasks = list(tasks)
    charge_s = charge_s or {}
    if reposition_s is None:
        reposition_s = lambda a, b: np.inf  # noqa: E731
    n = len(tasks)
    tails, heads, kinds = [], [], []
    for k in range(n):
        tails.append(start_node(k)); heads.append(end_node(k)); kinds.append(TASK)
    for k in range(n):
        tails.append(SOURCE); heads.append(start_node(k)); kinds.append(SOURCE_EDGE)
    for k in range(n):
        tails.append(end_node(k)); heads.append(SINK); kinds.append(SINK_EDGE)
    if n:
        delta = turnaround_matrix(tasks, reposition_s, charge_s)
        start = np.array([t.start_time for t in tasks])
        end = np.array([t.end_time for t in tasks])
        ok = end[:, None] + delta <= start[None, :]
        if policy == "exact":
            types = np.array([t.aircraft for t in tasks], dtype=object)
            ok &= types[:, None] == types[None, :]
        elif policy == "substitution":
            size = np.array([seats[t.aircraft] if seats else t.seats for t in tasks], dtype=float)
            ok &= size[None, :] <= size[:, None]
        else:
            raise ValueError(f"unknown policy {policy!r}")
        np.fill_diagonal(ok, False)
        ii, jj = np.nonzero(ok)
        tails += (3 + 2 * ii).tolist()
        heads += (2 + 2 * jj).tolist()
        kinds += [TRANSITION] * len(ii)
    m = len(tails)
    costs = np.array([1 if kd == SOURCE_EDGE else 0 for kd in kinds], dtype=np.int64)
    lower = np.array([1 if kd == TASK else 0 for kd in kinds], dtype=np.int64)
    return TimeExpandedGraph(tasks, np.array(tails, dtype=np.int64), np.array(heads, dtype=np.int64),
                             kinds, costs, np.ones(m, dtype=np.int64), lower, n)


@dataclass
class FleetSolution:
    fleet_size: int
    rotations: list  # lists of task ids in flying order
    per_type: dict
    objective: int
    flows: np.ndarray = field(repr=False, default=None)
    graph: TimeExpandedGraph = field(repr=False, default=None)

    def conservation_residual(self):
        """Inflow - outflow - required balance at every node (zero when feasible)."""
        g = self.graph
        net = np.zeros(g.n_nodes, dtype=np.int64)
        np.add.at(net, g.heads, self.flows)
        np.subtract.at(net, g.tails, self.flows)
        required = g.node_balance()
        # source/sink slack is routed internally, outside the graph's edges
        required[SOURCE] = -self.fleet_size
        required[SINK] = self.fleet_size
        return net - required


def solve_min_fleet(graph):
    """Minimum fleet over a time-expanded graph.

    The source may emit up to ``N = |T|`` units; the unused part of that supply
    is returned to the sink on an internal zero-cost bypass so that the source
    and sink balances of -N and +N hold while source edges stay optional.
    """
    n_tasks = len(graph.tasks)
    if n_tasks == 0:
        return FleetSolution(0, [], {}, 0, np.zeros(0, dtype=np.int64), graph)
    tails = graph.tails.tolist() + [SOURCE]
    heads = graph.heads.tolist() + [SINK]
    lower = graph.lower.tolist() + [0]
    upper = graph.capacity.tolist() + [graph.supply_n]
    cost = graph.costs.tolist() + [0]
    supply = [0] * graph.n_nodes
    supply[SOURCE] = graph.supply_n
    supply[SINK] = -graph.supply_n
    flows = np.array(min_cost_flow(graph.n_nodes, tails, heads, lower, upper, cost, supply)[:-1], dtype=np.int64)

    task_edges = graph.edges_of(TASK)
    if np.any(flows[task_edges] != 1):
        raise Infeasible("a task edge is not covered")
    fleet = int(flows[graph.edges_of(SOURCE_EDGE)].sum())
    objective = int((flows * graph.costs).sum())

    succ = {}
    first = []
    for k in np.nonzero(flows)[0]:
        kind = graph.kinds[k]
        if kind == TRANSITION:
            succ[(int(graph.tails[k]) - 3) // 2] = (int(graph.heads[k]) - 2) // 2
        elif kind == SOURCE_EDGE:
            first.append((int(graph.heads[k]) - 2) // 2)
    rotations = []
    per_type = {}
    for k in sorted(first, key=lambda k: (graph.tasks[k].start_time, graph.tasks[k].id)):
        chain = [k]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        rotations.append([graph.tasks[i].id for i in chain])
        lead = max((graph.tasks[i] for i in chain), key=lambda t: (t.seats or 0, t.aircraft))
        per_type[lead.aircraft] = per_type.get(lead.aircraft, 0) + 1
    return FleetSolution(fleet, rotations, per_type, objective, flows, graph)


def size_homogeneous(tasks, aircraft, reposition_s=None, charge_s=None):
    chosen = [t for t in tasks if t.aircraft == aircraft]
    return solve_min_fleet(build_graph(chosen, reposition_s, charge_s, "exact"))


@dataclass
class CombinedFleet:
    solutions: dict  # aircraft type -> FleetSolution
    total: int
    per_type: dict  # type -> aircraft count
    occupancy: dict  # type -> passengers / seats over flown tasks
    n_tasks: dict


def size_combined(tasks, reposition_s=None, charge_s=None, policy="exact", seats=None, threads=1):
    """Fleet for the whole task set, reported per aircraft type.

    Under ``exact`` the graph splits by type, so per-type solves run
    independently (optionally on a thread pool) and their sizes add up.
    """
    tasks = list(tasks)
    types = sorted({t.aircraft for t in tasks})
    if policy == "exact":
        if threads > 1 and len(types) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                sols = list(pool.map(lambda k: size_homogeneous(tasks, k, reposition_s, charge_s), types))
        else:
            sols = [size_homogeneous(tasks, k, reposition_s, charge_s) for k in types]
        solutions = dict(zip(types, sols))
        per_type = {k: s.fleet_size for k, s in solutions.items()}
    else:
        joint = solve_min_fleet(build_graph(tasks, reposition_s, charge_s, policy, seats))
        solutions = {"*": joint}
        per_type = {k: joint.per_type.get(k, 0) for k in types}
    occupancy, counts = {}, {}
    for k in types:
        flown = [t for t in tasks if t.aircraft == k]
        counts[k] = len(flown)
        seat_total = sum((seats or {}).get(k, t.seats or 0) for t in flown)
        occupancy[k] = sum(t.passengers for t in flown) / seat_total if seat_total else float("nan")
    return CombinedFleet(solutions, sum(per_type.values()), per_type, occupancy, counts)
