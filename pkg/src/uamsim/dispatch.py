"""UAM leg of a trip: airport pair choice, capacity-gated departures, itineraries.

A party drives to the origin airport, waits for a runway slot, flies, and drives
from the destination airport.  Runway slots are shared by take-offs and
landings; any two operations on one runway are at least the airport's
separation interval apart.  A flight is only released when its arrival slot at
the destination is also free, so airborne holding never occurs and every wait
shows up as ground hold at the origin.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NoFeasiblePair, NoFeasibleType, UnreachablePair
from .flight import flight_time_array


@dataclass(frozen=True)
class UamItinerary:
    trip: str
    departure_time: float
    origin_airport: str
    destination_airport: str
    access_time: float
    flight_time: float
    egress_time: float
    aircraft: str
    passengers: tuple  # per flight; more than one entry when the party is split
    distance_mi: float = 0.0
    hold_time: float = 0.0

    @property
    def ready_time(self):
        return self.departure_time + self.access_time

    @property
    def takeoff_time(self):
        return self.ready_time + self.hold_time

    @property
    def arrival_time(self):
        return self.takeoff_time + self.flight_time

    @property
    def n_flights(self):
        return len(self.passengers)

    @property
    def total(self):
        return self.access_time + self.hold_time + self.flight_time + self.egress_time


@dataclass(frozen=True)
class Departure:
    trip: str
    flight: int
    airport: str
    runway: int
    ready_s: float
    depart_s: float
    aircraft: str
    passengers: int
    destination: str
    arrival_runway: int
    arrival_s: float

    @property
    def hold_s(self):
        return self.depart_s - self.ready_s


def _clear_of(x, op, interval):
    return abs(x - op) >= interval


def earliest_free(ops, t, interval):
    """Smallest x >= t that keeps every op in ``ops`` (sorted) ``interval`` away.

    Reference implementation used by the tests; queues use :class:`RunwaySchedule`.
    """
    x = t
    while True:
        lo = bisect.bisect_left(ops, x - 2 * interval)
        hi = bisect.bisect_right(ops, x + 2 * interval)
        clash = [op for op in ops[lo:hi] if not _clear_of(x, op, interval)]
        if not clash:
            return x
        last = max(clash)
        x = last + interval
        while x - last < interval:
            x = math.nextafter(x, math.inf)


class RunwaySchedule:
    """Operation times on one runway, plus the merged open intervals they block.

    Each op blocks ``(op - interval, op + interval)``; the bounds are nudged
    outward by an ulp where needed so that any time outside the blocked set is
    at least ``interval`` from every op under float subtraction.
    """

    def __init__(self, interval):
        self.interval = interval
        self.ops = []
        self.starts = []
        self.ends = []

    def earliest_free(self, t):
        i = bisect.bisect_left(self.starts, t) - 1
        if i >= 0 and t < self.ends[i]:
            return self.ends[i]
        return t

    def book(self, op):
        T = self.interval
        a, b = op - T, op + T
        while op - a < T:
            a = math.nextafter(a, -math.inf)
        while b - op < T:
            b = math.nextafter(b, math.inf)
        lo = bisect.bisect_right(self.ends, a)
        hi = bisect.bisect_left(self.starts, b)
        if lo < hi:
            a = min(a, self.starts[lo])
            b = max(b, self.ends[hi - 1])
        self.starts[lo:hi] = [a]
        self.ends[lo:hi] = [b]
        bisect.insort(self.ops, op)

    def unbook(self, op):
        ops = self.ops
        ops.pop(bisect.bisect_left(ops, op))
        self.ops, self.starts, self.ends = [], [], []
        for x in ops:
            self.book(x)


@dataclass
class AirportQueue:
    airport: str
    separation: float
    n_runways: int
    capacity: int | None = None  # simultaneous ground-held flights; None is unlimited
    runways: list = field(default_factory=list)
    departures: list = field(default_factory=list)  # sorted release times

    def __post_init__(self):
        if not self.runways:
            self.runways = [RunwaySchedule(self.separation) for _ in range(self.n_runways)]

    @property
    def ops(self):
        return [r.ops for r in self.runways]

    def waiting_at(self, t):
        """Flights already queued here that have not left by time t."""
        return len(self.departures) - bisect.bisect_right(self.departures, t)

    def gate_time(self, t):
        """Earliest time >= t at which one more flight fits under the hold cap."""
        if self.capacity is None:
            return t
        waiting = self.waiting_at(t)
        if waiting + 1 <= self.capacity:
            return t
        later = self.departures[len(self.departures) - waiting:]
        return max(t, later[waiting - self.capacity])

    def best_runway(self, t):
        best = None
        for r, rw in enumerate(self.runways):
            x = rw.earliest_free(t)
            if best is None or x < best[0]:
                best = (x, r)
        return best

    def book(self, runway, t):
        self.runways[runway].book(t)

    def unbook(self, runway, t):
        self.runways[runway].unbook(t)

    def release(self, t):
        bisect.insort(self.departures, t)

    def unrelease(self, t):
        self.departures.pop(bisect.bisect_left(self.departures, t))


def make_queues(airports):
    return {
        a.id: AirportQueue(a.id, a.separation_interval, len(a.runways), a.hold_capacity)
        for a in airports
    }


def find_slot(origin_q, dest_q, ready, flight_s):
    """Joint (take-off, landing) slot search. Returns (depart, runway, arrive, arrival_runway)."""
    d = origin_q.gate_time(ready)
    while True:
        d1, r1 = origin_q.best_runway(d)
        a, r2 = dest_q.best_runway(d1 + flight_s)
        if a == d1 + flight_s:
            return d1, r1, a, r2
        nd = a - flight_s
        d = nd if nd > d1 else math.nextafter(d1, math.inf)


def simulate_departures(itineraries, queues):
    """Fill ``hold_time`` for every itinerary, booking runway slots in ``queues``.

    Flights are released in ready-time order (ties by trip id).  Parties split
    across several aircraft take consecutive slots; the party's hold is that of
    its last aircraft.  Returns ``(itineraries, event_log)``.
    """
    order = sorted(itineraries, key=lambda it: (it.ready_time, it.trip))
    out = {}
    log = []
    for it in order:
        oq = queues[it.origin_airport]
        dq = queues[it.destination_airport]
        ready = it.ready_time
        last = ready
        for k, pax in enumerate(it.passengers):
            depart, r1, arrive, r2 = find_slot(oq, dq, ready, it.flight_time)
            oq.book(r1, depart)
            dq.book(r2, arrive)
            oq.release(depart)
            log.append(Departure(it.trip, k, it.origin_airport, r1, ready, depart, it.aircraft,
                                 pax, it.destination_airport, r2, arrive))
            last = max(last, depart)
        out[it.trip] = replace(it, hold_time=last - ready)
    return [out[it.trip] for it in itineraries], log


def probe_hold(itinerary, queues):
    """Hold a flight would get if added to the current schedule, without booking."""
    oq = queues[itinerary.origin_airport]
    dq = queues[itinerary.destination_airport]
    depart, _, _, _ = find_slot(oq, dq, itinerary.ready_time, itinerary.flight_time)
    return depart - itinerary.ready_time


def select_aircraft(party, types):
    """Smallest-seat type that holds the whole party, else split over the largest.

    ``types`` are the types already filtered for range and runway.  Returns
    ``(type, passengers_per_flight)``.
    """
    if not types:
        raise NoFeasibleType("no aircraft type passes the range and runway filters")
    fits = [t for t in types if t.seats >= party]
    if fits:
        best = min(fits, key=lambda t: (t.seats, t.name))
        return best, (party,)
    largest = min(types, key=lambda t: (-t.seats, t.name))
    n = -(-party // largest.seats)
    pax = tuple([largest.seats] * (n - 1) + [party - largest.seats * (n - 1)])
    return largest, pax


def feasible_types(catalog, distance_mi, runway_limit_ft):
    return [t for t in catalog if t.range >= distance_mi and t.min_runway_length <= runway_limit_ft]


class UamPlanner:
    """Builds hold-free itineraries from current congested road times."""

    def __init__(self, scenario, road):
        self.scenario = scenario
        self.road = road
        self.airports = sorted(scenario.airports, key=lambda a: a.id)
        self.ids = [a.id for a in self.airports]
        idx = scenario.network.node_index
        self.anchors = [idx[a.anchor] for a in self.airports]
        n = len(self.airports)
        dist = np.zeros((n, n))
        for i, a in enumerate(self.airports):
            for j, b in enumerate(self.airports):
                if i != j:
                    dist[i, j] = scenario.airport_distance(a.id, b.id)
        self.distance = dist
        self.types = {}
        flight = flight_time_array(dist, scenario.config.flight_profile) * 60.0
        for i, a in enumerate(self.airports):
            for j, b in enumerate(self.airports):
                ok = i != j and a.id != b.id and dist[i, j] > 0
                cands = feasible_types(scenario.aircraft, dist[i, j], min(a.longest_runway, b.longest_runway)) if ok else []
                if cands:
                    self.types[i, j] = cands
                else:
                    flight[i, j] = np.inf
        self.flight_s = flight

    @property
    def has_pairs(self):
        return bool(self.types)

    def _egress_table(self, period):
        return self.road.anchor_tables(period, self.anchors)[1]

    def egress_time(self, airport_index, destination, t):
        d = self._egress_table(self.road.period_of(t))[airport_index, self.scenario.network.node_index[destination]]
        return float(d)

    def plan(self, trips):
        """Return ``(itineraries, failures)`` keyed by trip id."""
        itins, failures = {}, {}
        if not trips:
            return itins, failures
        if not self.has_pairs:
            for trip in trips:
                failures[trip.id] = NoFeasiblePair("fewer than two usable airports")
            return itins, failures
        idx = self.scenario.network.node_index
        road = self.road
        n_air = len(self.airports)
        groups = {}
        for trip in trips:
            groups.setdefault(road.period_of(trip.departure_time), []).append(trip)
        for p in sorted(groups):
            group = groups[p]
            origins = np.array([idx[t.origin] for t in group])
            dests = np.array([idx[t.destination] for t in group])
            dep = np.array([t.departure_time for t in group])
            to_anchor, _ = road.anchor_tables(p, self.anchors)
            access = to_anchor[:, origins].T
            base = access[:, :, None] + self.flight_s[None, :, :]
            arrival = dep[:, None, None] + base
            finite = np.isfinite(arrival)
            periods = np.full(arrival.shape, -1, dtype=np.int64)
            periods[finite] = np.minimum(arrival[finite] // road.period_s, road.n_periods - 1).astype(np.int64)
            egress = np.full(arrival.shape, np.inf)
            for q in np.unique(periods[finite]):
                table = self._egress_table(int(q))[:, dests].T  # (m, A) by destination airport
                mask = periods == q
                egress = np.where(mask, table[:, None, :], egress)
            total = (base + egress).reshape(len(group), n_air * n_air)
            best = np.argmin(total, axis=1)
            for k, trip in enumerate(group):
                b = int(best[k])
                if not np.isfinite(total[k, b]):
                    failures[trip.id] = UnreachablePair(trip.origin, trip.destination)
                    continue
                i, j = divmod(b, n_air)
                actype, pax = select_aircraft(trip.party_size, self.types[i, j])
                itins[trip.id] = UamItinerary(
                    trip.id, trip.departure_time, self.ids[i], self.ids[j],
                    float(access[k, i]), float(self.flight_s[i, j]), float(egress[k, i, j]),
                    actype.name, pax, float(self.distance[i, j]),
                )
        return itins, failures

    def with_holds(self, itineraries, queues):
        """Simulate departures then re-evaluate egress at the actual arrival time."""
        held, log = simulate_departures(itineraries, queues)
        pos = {a: i for i, a in enumerate(self.ids)}
        out = []
        for it in held:
            trip = self.scenario.trip_by_id[it.trip]
            egress = self.egress_time(pos[it.destination_airport], trip.destination, it.arrival_time)
            out.append(replace(it, egress_time=egress))
        return out, log


def select_airport_pair(trip, scenario, road):
    """Pair minimising access + flight + egress; ties to the smaller airport ids."""
    if len(scenario.airports) < 2:
        raise NoFeasiblePair("need at least two airports")
    itins, failures = UamPlanner(scenario, road).plan([trip])
    if trip.id in failures:
        raise failures[trip.id]
    it = itins[trip.id]
    return it.origin_airport, it.destination_airport


def uam_travel_time(trip, scenario, road, queues=None):
    """Door-to-door UAM itinerary for one trip; books into ``queues`` if given."""
    planner = UamPlanner(scenario, road)
    itins, failures = planner.plan([trip])
    if trip.id in failures:
        raise failures[trip.id]
    if queues is None:
        queues = make_queues(scenario.airports)
    held, _ = planner.with_holds([itins[trip.id]], queues)
    return held[0]
