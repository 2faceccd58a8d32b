"""Mesoscopic ground assignment with a BPR volume-delay function.

Trips are bucketed into fixed departure periods.  Each round routes every trip
all-or-nothing on the current congested link times, averages the resulting
link volumes into the running estimate with weight 1/k (method of successive
averages) and re-evaluates

    congested_time = free_flow_time * (1 + alpha * (volume / capacity) ** beta)

Volumes are expressed in vehicles/hour, so a single vehicle departing in a
15 minute period adds 4 vph to every link on its path.
"""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import UnreachablePair
from .scenario import SECONDS_PER_DAY


def bpr_time(free_flow_time, volume, capacity, alpha, beta):
    return free_flow_time * (1.0 + alpha * (volume / capacity) ** beta)


@dataclass(frozen=True)
class LinkState:
    link: int
    period: int
    assigned_volume: float
    congested_time: float


class RoadTimes:
    """Shortest-path queries over a (periods x links) table of link times."""

    def __init__(self, network, link_times, period_s=900.0):
        self.network = network
        self.link_times = np.asarray(link_times, dtype=float)
        self.period_s = period_s
        self._graphs = {}
        self._trees = {}

    @classmethod
    def free_flow(cls, network, period_s=900.0):
        n_periods = math.ceil(SECONDS_PER_DAY / period_s)
        return cls(network, np.tile(network.free_flow_times, (n_periods, 1)), period_s)

    @property
    def n_periods(self):
        return self.link_times.shape[0]

    def period_of(self, t):
        return min(max(int(t // self.period_s), 0), self.n_periods - 1)

    def graph(self, period):
        """CSR graph for one period plus the link chosen for each (tail, head).

        Parallel links collapse to their fastest member.
        """
        if period not in self._graphs:
            net = self.network
            times = self.link_times[period]
            order = np.lexsort((np.arange(len(times)), times, net.heads, net.tails))
            tails, heads = net.tails[order], net.heads[order]
            first = np.ones(len(order), dtype=bool)
            first[1:] = (tails[1:] != tails[:-1]) | (heads[1:] != heads[:-1])
            keep = order[first]
            n = net.n_nodes
            g = csr_matrix((times[keep], (net.tails[keep], net.heads[keep])), shape=(n, n))
            # keep is already ordered by (tail, head), so the keys are sorted
            keys = net.tails[keep] * n + net.heads[keep]
            self._graphs[period] = (g, (keys, keep))
        return self._graphs[period]

    def from_sources(self, period, sources):
        """Distances (len(sources) x n_nodes) from each source node index."""
        g, _ = self.graph(period)
        return dijkstra(g, directed=True, indices=np.asarray(sources, dtype=np.int64))

    def to_targets(self, period, targets):
        """Distances (len(targets) x n_nodes) from every node to each target."""
        key = ("to", period, tuple(targets))
        if key not in self._trees:
            g, _ = self.graph(period)
            self._trees[key] = dijkstra(g.T.tocsr(), directed=True, indices=np.asarray(targets, dtype=np.int64))
        return self._trees[key]

    def anchor_tables(self, period, anchors):
        """Cached (to_anchor, from_anchor) distance tables for a period."""
        key = ("anchors", period, tuple(anchors))
        if key not in self._trees:
            self._trees[key] = (self.to_targets(period, anchors), self.from_sources(period, anchors))
        return self._trees[key]

    def od_time(self, t, origin, destination):
        idx = self.network.node_index
        if origin == destination:
            return 0.0
        d = self.from_sources(self.period_of(t), [idx[origin]])[0, idx[destination]]
        if not np.isfinite(d):
            raise UnreachablePair(origin, destination)
        return float(d)


@dataclass
class TravelTimeField:
    trip_times: dict
    unreachable: set
    link_times: np.ndarray
    link_volumes: np.ndarray
    period_s: float = 900.0
    rounds: int = 0
    network: object = field(default=None, repr=False)

    def time(self, trip_id):
        if trip_id in self.unreachable:
            raise UnreachablePair(trip_id, "?")
        return self.trip_times[trip_id]

    def road_times(self):
        return RoadTimes(self.network, self.link_times, self.period_s)

    def link_states(self, period):
        ff = self.network.free_flow_times
        return [
            LinkState(k, period, float(self.link_volumes[period, k]), float(self.link_times[period, k]))
            for k in range(len(ff))
        ]

    @property
    def total_vehicle_hours(self):
        return sum(t for t in self.trip_times.values() if math.isfinite(t)) / 3600.0

    def volume_rows(self):
        """(link, period, volume, congested_s) for every loaded link-period."""
        periods, links = np.nonzero(self.link_volumes)
        order = np.lexsort((periods, links))
        return [
            (int(links[i]), int(periods[i]), float(self.link_volumes[periods[i], links[i]]),
             float(self.link_times[periods[i], links[i]]))
            for i in order
        ]


def _route_period(road, network, period, trips, want_paths):
    """Shortest-path times (and optionally per-link vehicle counts) for one period."""
    idx = network.node_index
    o = np.fromiter((idx[t.origin] for t in trips), dtype=np.int64, count=len(trips))
    dst = np.fromiter((idx[t.destination] for t in trips), dtype=np.int64, count=len(trips))
    origins, rows = np.unique(o, return_inverse=True)
    g, (keys, link_ids) = road.graph(period)
    if want_paths:
        dist, pred = dijkstra(g, directed=True, indices=origins, return_predecessors=True)
    else:
        dist, pred = dijkstra(g, directed=True, indices=origins), None
    t = dist[rows, dst]
    times = {trip.id: float(x) for trip, x in zip(trips, t)}
    counts = np.zeros(len(network.links))
    if want_paths:
        n = network.n_nodes
        cur = dst.copy()
        active = np.nonzero(np.isfinite(t) & (cur != o))[0]
        while active.size:
            u = pred[rows[active], cur[active]]
            links = link_ids[np.searchsorted(keys, u * n + cur[active])]
            counts += np.bincount(links, minlength=len(counts))
            cur[active] = u
            active = active[u != o[active]]
    return times, counts


def assign(network, ground_trips, iterations, period_s=900.0, threads=1):
    """Congestion-aware ground travel times for ``ground_trips``.

    Runs ``iterations`` MSA rounds then evaluates every trip's shortest path on
    the final congested link times.  Trips with no path are reported in
    ``unreachable`` with an infinite time instead of raising.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    road = RoadTimes.free_flow(network, period_s)
    ff = network.free_flow_times
    link_times = road.link_times.copy()
    volumes = np.zeros_like(link_times)
    scale = 3600.0 / period_s

    by_period = defaultdict(list)
    for trip in sorted(ground_trips, key=lambda t: t.id):
        if trip.origin == trip.destination:
            continue
        by_period[road.period_of(trip.departure_time)].append(trip)
    periods = sorted(by_period)

    def run(want_paths):
        road_k = RoadTimes(network, link_times, period_s)
        jobs = [(p, by_period[p]) for p in periods]
        if threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(lambda j: _route_period(road_k, network, j[0], j[1], want_paths), jobs))
        return [_route_period(road_k, network, p, trips, want_paths) for p, trips in jobs]

    for k in range(1, iterations + 1):
        results = run(True)
        for p, (_, counts) in zip(periods, results):
            volumes[p] += (counts * scale - volumes[p]) / k
            link_times[p] = bpr_time(ff, volumes[p], network.capacities, network.alphas, network.betas)

    trip_times = {}
    for _, (times, _) in zip(periods, run(False)):
        trip_times.update(times)
    for trip in ground_trips:
        if trip.origin == trip.destination:
            trip_times[trip.id] = 0.0
    unreachable = {tid for tid, t in trip_times.items() if not np.isfinite(t)}
    return TravelTimeField(trip_times, unreachable, link_times, volumes, period_s, iterations, network)


def baseline_driving_times(network, all_trips, iterations, period_s=900.0, mode="congested", threads=1):
    """Per-trip driving time with every trip on the road (or free-flow times)."""
    if mode == "freeflow":
        return path_times(RoadTimes.free_flow(network, period_s), all_trips)
    if not all_trips:
        return {}
    return dict(assign(network, all_trips, iterations, period_s, threads).trip_times)


def path_times(road, trips):
    """Shortest-path times on fixed link times, without loading the network."""
    by_period = defaultdict(list)
    for trip in trips:
        by_period[road.period_of(trip.departure_time)].append(trip)
    out = {}
    for p in sorted(by_period):
        out.update(_route_period(road, road.network, p, by_period[p], False)[0])
    return out
