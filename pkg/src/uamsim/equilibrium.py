"""Day-to-day mode allocation between UAM and ground until few trips switch.

Each iteration recomputes UAM door-to-door times for the current UAM set and
demotes trips slower than their baseline drive, reloads the road network and
promotes ground trips whose drive has not improved.  Early iterations promote
only a fraction of the eligible trips, largest excess first; later ones promote
every eligible trip whose estimated UAM time beats both its current and its
baseline drive.  The loop stops once the switching share falls below the
tolerance, after which demotion is repeated until no UAM trip is slower than
its baseline.
"""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass, field, replace

import numpy as np

from .dispatch import UamPlanner, find_slot, make_queues, simulate_departures
from .errors import InvariantViolation
from .ground import RoadTimes, assign, path_times
from .scenario import ModePlan, ODTrip

log = logging.getLogger(__name__)

UAM, GROUND = "uam", "ground"


@dataclass
class EquilibriumState:
    iteration: int
    uam: set
    ground: set
    t_uam: dict
    t_ground: dict
    t_driving: dict
    switched: int = 0
    itineraries: dict = field(default_factory=dict)  # current UAM itineraries and estimates

    def check_partition(self, all_ids):
        if self.uam & self.ground:
            raise InvariantViolation("a trip is in both modes")
        if self.uam | self.ground != set(all_ids):
            raise InvariantViolation("a trip is in neither mode")


@dataclass
class IterationRecord:
    iteration: int
    n_uam: int
    n_ground: int
    switched: int
    median_uam_saving_s: float


@dataclass
class EquilibriumReport:
    uam: tuple
    ground: tuple
    plans: dict
    thresholds: list  # (threshold_s, n_benefited, median_driving_s)
    n_benefited: int  # at config.time_saving_threshold
    median_driving_uam_s: float
    benefit_s: dict  # mode -> sum of (t_driving - realized)
    iterations: int
    converged: bool
    log: list
    itineraries: list = field(default_factory=list)
    departures: list = field(default_factory=list)
    ground_field: object = None
    warnings: list = field(default_factory=list)


def _median(values):
    values = [v for v in values if math.isfinite(v)]
    return float(statistics.median(values)) if values else float("nan")


def _plan_uam(scenario, road, trips):
    """Hold-free itineraries; trips with no usable UAM path get an infinite time."""
    planner = UamPlanner(scenario, road)
    itins, failures = planner.plan(trips)
    return planner, itins, failures


def recompute_uam(scenario, road, trip_ids):
    """Dispatch the given UAM trips together; returns (times, itineraries, log)."""
    trips = [scenario.trip_by_id[t] for t in sorted(trip_ids)]
    planner, itins, failures = _plan_uam(scenario, road, trips)
    held, events = planner.with_holds([itins[t.id] for t in trips if t.id in itins], make_queues(scenario.airports))
    times = {t: math.inf for t in failures}
    times.update({it.trip: it.total for it in held})
    return times, {it.trip: it for it in held}, events


def ground_legs(scenario, itineraries):
    """Access and egress drives of UAM trips as extra road trips."""
    legs = []
    anchors = scenario.airport_by_id
    for it in itineraries:
        trip = scenario.trip_by_id[it.trip]
        o = anchors[it.origin_airport].anchor
        d = anchors[it.destination_airport].anchor
        if trip.origin != o:
            legs.append(ODTrip(f"{it.trip}/access", trip.origin, o, trip.departure_time, 1))
        if d != trip.destination:
            legs.append(ODTrip(f"{it.trip}/egress", d, trip.destination, min(it.arrival_time, 86399.0), 1))
    return legs


def load_ground(scenario, state, threads=1):
    """Assign ground trips plus UAM access/egress legs; returns the travel-time field."""
    cfg = scenario.config
    trips = [scenario.trip_by_id[t] for t in sorted(state.ground)]
    trips += ground_legs(scenario, [state.itineraries[t] for t in sorted(state.uam) if t in state.itineraries])
    return assign(scenario.network, trips, cfg.assignment_iterations, cfg.period_s, threads)


def initialize(scenario, t_driving, road):
    """Initial split: UAM wherever an uncongested-airport UAM trip beats driving."""
    ids = [t.id for t in scenario.trips]
    _, itins, failures = _plan_uam(scenario, road, scenario.trips)
    t_uam = {t: math.inf for t in failures}
    t_uam.update({t: it.total for t, it in itins.items()})
    uam = {t for t in ids if t_uam[t] <= t_driving[t]}
    state = EquilibriumState(0, uam, set(ids) - uam, t_uam, dict(t_driving), dict(t_driving),
                             itineraries={t: itins[t] for t in uam})
    return state


def demote(state):
    """Move every UAM trip with t_uam > t_driving to ground."""
    out = {t for t in state.uam if state.t_uam[t] > state.t_driving[t]}
    if not out:
        return replace(state, switched=0)
    return replace(
        state,
        uam=state.uam - out,
        ground=state.ground | out,
        switched=len(out),
        itineraries={t: it for t, it in state.itineraries.items() if t not in out},
    )


def eligible_for_promotion(state, slack):
    return sorted(t for t in state.ground if state.t_ground[t] > state.t_driving[t] - slack)


def promote(state, beta, index_threshold, slack=0.0, estimates=None, selection="gap", rng=None):
    """Move ground trips to UAM.

    Before ``index_threshold`` iterations, ``ceil(beta * |eligible|)`` trips
    with the largest ``t_ground - t_driving`` move (ties by trip id), or a
    seeded random sample of that size.  From then on every eligible trip moves
    whose estimated UAM time (``estimates``) is no worse than its current drive
    or its baseline.
    """
    eligible = eligible_for_promotion(state, slack)
    if state.iteration < index_threshold:
        k = math.ceil(beta * len(eligible))
        if selection == "random":
            rng = rng or np.random.default_rng(0)
            picked = sorted(rng.choice(eligible, size=k, replace=False).tolist()) if k else []
        else:
            picked = sorted(eligible, key=lambda t: (-(state.t_ground[t] - state.t_driving[t]), t))[:k]
    else:
        estimates = estimates or {}
        picked = [
            t for t in eligible
            if t in estimates and estimates[t] <= state.t_ground[t] and estimates[t] <= state.t_driving[t]
        ]
    picked = set(picked)
    return replace(state, uam=state.uam | picked, ground=state.ground - picked, switched=len(picked))


def _book(oq, dq, slot):
    depart, r1, arrive, r2 = slot
    oq.book(r1, depart)
    dq.book(r2, arrive)
    oq.release(depart)


def estimate_uam(scenario, road, trip_ids, booked, accept=None):
    """Sequential UAM estimates for candidate trips against an existing schedule.

    Candidates are evaluated in ready-time order; those ``accept(trip, time)``
    approves keep their slots, so later candidates see the holds they cause.
    """
    trips = [scenario.trip_by_id[t] for t in sorted(trip_ids)]
    planner, itins, _ = _plan_uam(scenario, road, trips)
    queues = make_queues(scenario.airports)
    simulate_departures(booked, queues)
    times, out = {}, {}
    for it in sorted(itins.values(), key=lambda it: (it.ready_time, it.trip)):
        oq, dq = queues[it.origin_airport], queues[it.destination_airport]
        if it.n_flights == 1:
            slot = find_slot(oq, dq, it.ready_time, it.flight_time)
            held = replace(it, hold_time=slot[0] - it.ready_time)
            times[it.trip], out[it.trip] = held.total, held
            if accept is None or accept(it.trip, held.total):
                _book(oq, dq, slot)
            continue
        slots = []
        for _ in it.passengers:
            slots.append(find_slot(oq, dq, it.ready_time, it.flight_time))
            _book(oq, dq, slots[-1])
        held = replace(it, hold_time=slots[-1][0] - it.ready_time)
        times[it.trip], out[it.trip] = held.total, held
        if accept is not None and not accept(it.trip, held.total):
            for depart, r1, arrive, r2 in slots:
                oq.unbook(r1, depart)
                dq.unbook(r2, arrive)
                oq.unrelease(depart)
    return times, out


def run_to_equilibrium(scenario, threads=1, t_driving=None, baseline_field=None):
    cfg = scenario.config
    ids = sorted(t.id for t in scenario.trips)
    n_total = len(ids)
    if baseline_field is None:
        baseline_field = assign(scenario.network, scenario.trips, cfg.assignment_iterations, cfg.period_s, threads) \
            if scenario.trips else None
    if t_driving is None:
        if cfg.driving_baseline == "freeflow":
            t_driving = path_times(RoadTimes.free_flow(scenario.network, cfg.period_s), scenario.trips)
        else:
            t_driving = dict(baseline_field.trip_times) if baseline_field else {}
    if not ids:
        return _report(scenario, EquilibriumState(0, set(), set(), {}, {}, {}), [], [], None, True, [], 0)

    road = baseline_field.road_times()
    state = initialize(scenario, t_driving, road)
    records = []
    converged = False
    iteration = 0
    field_ = baseline_field
    while iteration < cfg.max_iterations:
        state.iteration = iteration
        t_uam, itins, _ = recompute_uam(scenario, road, state.uam)
        state.t_uam.update(t_uam)
        state.itineraries = {t: itins[t] for t in state.uam if t in itins}
        state = demote(state)
        demoted = state.switched

        field_ = load_ground(scenario, state, threads)
        road = field_.road_times()
        state.t_ground.update({t: field_.trip_times[t] for t in state.ground})
        state.t_ground.update(path_times(road, [scenario.trip_by_id[t] for t in sorted(state.uam)]))

        estimates, est_itins = {}, {}
        if iteration >= cfg.promotion_index_threshold:
            candidates = eligible_for_promotion(state, cfg.promotion_slack)
            def accept(t, est, state=state):
                return est <= state.t_ground[t] and est <= state.t_driving[t]

            estimates, est_itins = estimate_uam(scenario, road, candidates, list(state.itineraries.values()), accept)
        rng = np.random.default_rng(cfg.random_seed + iteration)
        state = promote(state, cfg.beta_promotion, cfg.promotion_index_threshold, cfg.promotion_slack,
                        estimates, cfg.promotion_selection, rng)
        promoted = state.switched
        new = sorted(state.uam - set(state.itineraries))
        fresh = {t: est_itins[t] for t in new if t in est_itins}
        missing = [t for t in new if t not in fresh]
        if missing:
            _, planned, _ = _plan_uam(scenario, road, [scenario.trip_by_id[t] for t in missing])
            fresh.update(planned)
            state.t_uam.update({t: it.total for t, it in planned.items()})
        state.t_uam.update(estimates)
        state.itineraries.update(fresh)
        state.switched = demoted + promoted
        state.check_partition(ids)

        savings = [state.t_driving[t] - state.t_uam[t] for t in state.uam]
        records.append(IterationRecord(iteration, len(state.uam), len(state.ground), state.switched, _median(savings)))
        log.info("iteration %d: uam=%d ground=%d switched=%d", iteration, len(state.uam), len(state.ground), state.switched)
        iteration += 1
        if state.switched / n_total < cfg.convergence_tolerance:
            converged = True
            break

    # demotion fixed point on consistent road times
    while True:
        field_ = load_ground(scenario, state, threads)
        road = field_.road_times()
        t_uam, itins, events = recompute_uam(scenario, road, state.uam)
        state.t_uam.update(t_uam)
        state.itineraries = {t: itins[t] for t in state.uam if t in itins}
        state = demote(state)
        if not state.switched:
            break
        records.append(IterationRecord(iteration, len(state.uam), len(state.ground), state.switched,
                                       _median([state.t_driving[t] - state.t_uam[t] for t in state.uam])))
        iteration += 1
    state.t_ground.update({t: field_.trip_times[t] for t in state.ground})
    state.t_ground.update(path_times(road, [scenario.trip_by_id[t] for t in sorted(state.uam)]))
    state.check_partition(ids)
    warnings = [] if converged else [f"no convergence within {cfg.max_iterations} iterations"]
    for w in warnings:
        log.warning(w)
    return _report(scenario, state, records, list(state.itineraries.values()), field_, converged, events, iteration,
                   warnings)


def benefit_curve(t_driving, t_uam, uam, thresholds):
    """(threshold, n trips saving at least threshold, their median driving time)."""
    rows = []
    savings = {t: t_driving[t] - t_uam[t] for t in uam}
    for s in thresholds:
        hit = [t for t, v in savings.items() if v >= s]
        rows.append((float(s), len(hit), _median([t_driving[t] for t in hit])))
    return rows


def _report(scenario, state, records, itineraries, field_, converged, events, iterations, warnings=()):
    cfg = scenario.config
    plans = {}
    for t in sorted(state.uam | state.ground):
        if t in state.uam:
            it = state.itineraries[t]
            plans[t] = ModePlan(t, UAM, state.t_uam[t], state.t_driving[t],
                                it.origin_airport, it.destination_airport, it.hold_time)
        else:
            plans[t] = ModePlan(t, GROUND, state.t_ground[t], state.t_driving[t])
    benefit = {UAM: 0.0, GROUND: 0.0}
    for p in plans.values():
        gain = p.baseline_driving_time - p.door_to_door_time
        if math.isfinite(gain):
            benefit[p.mode] += gain
    curve = benefit_curve(state.t_driving, state.t_uam, state.uam, cfg.saving_thresholds)
    n_benefited = sum(1 for t in state.uam if state.t_driving[t] - state.t_uam[t] >= cfg.time_saving_threshold)
    return EquilibriumReport(
        uam=tuple(sorted(state.uam)),
        ground=tuple(sorted(state.ground)),
        plans=plans,
        thresholds=curve,
        n_benefited=n_benefited,
        median_driving_uam_s=_median([state.t_driving[t] for t in state.uam]),
        benefit_s=benefit,
        iterations=iterations,
        converged=converged,
        log=records,
        itineraries=sorted(itineraries, key=lambda it: it.trip),
        departures=events,
        ground_field=field_,
        warnings=list(warnings),
    )
