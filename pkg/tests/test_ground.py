import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dijkstra_times
from uamsim.errors import UnreachablePair
from uamsim.ground import RoadTimes, assign, baseline_driving_times, bpr_time, path_times
from uamsim.scenario import GroundNetwork, Link, ODTrip, generate_synthetic_scenario

from conftest import line_network


def single_link():
    return GroundNetwork((("a", 0, 0), ("b", 1000, 0)), (Link("a", "b", 1000.0, 10.0, 100.0, 0.15, 4.0),))


def test_uncongested_path_time_is_sum_of_free_flow_times():
    net = line_network(3, spacing=1000, speed=10, alpha=0.0)
    field = assign(net, [ODTrip("t", "n0", "n2", 100.0)], 1)
    assert field.time("t") == pytest.approx(200.0)


def test_hand_evaluated_bpr_on_one_link():
    # 25 vehicles in one 15-minute period -> 100 vph on a 100 vph link
    trips = [ODTrip(f"t{i:02d}", "a", "b", 60.0 * i / 25) for i in range(25)]
    field = assign(single_link(), trips, 1)
    assert field.link_volumes[0, 0] == pytest.approx(100.0)
    assert field.link_times[0, 0] == pytest.approx(115.0)
    assert field.time("t00") == pytest.approx(115.0)


def test_msa_weights_average_rounds():
    # a single link sees the same all-or-nothing volume every round, so MSA keeps it
    trips = [ODTrip(f"t{i:02d}", "a", "b", 10.0) for i in range(25)]
    one = assign(single_link(), trips, 1)
    five = assign(single_link(), trips, 5)
    assert five.link_volumes[0, 0] == pytest.approx(one.link_volumes[0, 0])


def test_msa_splits_between_parallel_routes():
    # two equal routes a->b: MSA must share load rather than flip-flop all of it
    nodes = (("a", 0, 0), ("m1", 500, 100), ("m2", 500, -100), ("b", 1000, 0))
    links = (
        Link("a", "m1", 500, 10, 40, 0.15, 4), Link("m1", "b", 500, 10, 40, 0.15, 4),
        Link("a", "m2", 500, 10, 40, 0.15, 4), Link("m2", "b", 500, 10, 40, 0.15, 4),
    )
    trips = [ODTrip(f"t{i:02d}", "a", "b", 0.0) for i in range(40)]
    field = assign(GroundNetwork(nodes, links), trips, 20)
    v = field.link_volumes[0]
    assert v[0] > 0 and v[2] > 0
    assert v[0] == pytest.approx(v[2], rel=0.15)


def test_isolated_origin_is_unreachable():
    net = GroundNetwork((("a", 0, 0), ("b", 1, 0), ("c", 2, 0)), (Link("a", "b", 1, 1, 1e6, 0.15, 4),))
    field = assign(net, [ODTrip("t", "c", "b", 0.0), ODTrip("u", "a", "b", 0.0)], 1)
    assert "t" in field.unreachable
    assert math.isinf(field.trip_times["t"])
    assert field.time("u") == pytest.approx(1.0)
    with pytest.raises(UnreachablePair):
        field.time("t")


def test_iterations_must_be_positive():
    with pytest.raises(ValueError):
        assign(single_link(), [], 0)


def test_baseline_equals_assign_and_handles_empty():
    s = generate_synthetic_scenario(3, 25, 2, 60)
    assert baseline_driving_times(s.network, s.trips, 4) == assign(s.network, s.trips, 4).trip_times
    assert baseline_driving_times(s.network, [], 4) == {}


def test_baseline_not_below_free_flow_dijkstra():
    s = generate_synthetic_scenario(5, 25, 2, 3)
    net = s.network
    idx = net.node_index
    arcs = [(idx[l.from_node], idx[l.to_node], l.length / l.free_flow_speed) for l in net.links]
    base = baseline_driving_times(net, s.trips, 8)
    for t in s.trips:
        ff = dijkstra_times(net.n_nodes, arcs, idx[t.origin])[idx[t.destination]]
        assert base[t.id] >= ff - 1e-9


def test_free_flow_path_times_match_heap_dijkstra():
    s = generate_synthetic_scenario(11, 64, 2, 40)
    net = s.network
    idx = net.node_index
    arcs = [(idx[l.from_node], idx[l.to_node], l.length / l.free_flow_speed) for l in net.links]
    got = path_times(RoadTimes.free_flow(net), s.trips)
    for t in s.trips:
        want = dijkstra_times(net.n_nodes, arcs, idx[t.origin])[idx[t.destination]]
        assert got[t.id] == pytest.approx(want, rel=1e-12)


def test_parallel_links_use_the_fastest():
    nodes = (("a", 0, 0), ("b", 1000, 0))
    links = (Link("a", "b", 1000, 5, 100, 0.15, 4), Link("a", "b", 1000, 20, 100, 0.15, 4))
    field = assign(GroundNetwork(nodes, links), [ODTrip("t", "a", "b", 0.0)], 1)
    assert field.time("t") == pytest.approx(50 * (1 + 0.15 * (4 / 100) ** 4))
    assert field.link_volumes[0, 0] == 0 and field.link_volumes[0, 1] == pytest.approx(4.0)


def test_volume_rows_cover_loaded_links():
    trips = [ODTrip("t", "a", "b", 1000.0)]
    rows = assign(single_link(), trips, 1).volume_rows()
    assert rows == [(0, 1, pytest.approx(4.0), pytest.approx(100 * (1 + 0.15 * 0.04 ** 4)))]


@given(st.floats(0, 1e4), st.floats(0, 1e4), st.floats(1, 1e4), st.floats(0, 2), st.floats(1, 8))
def test_bpr_monotone_in_volume(v1, v2, cap, alpha, beta):
    lo, hi = sorted((v1, v2))
    assert bpr_time(10.0, lo, cap, alpha, beta) <= bpr_time(10.0, hi, cap, alpha, beta)


def test_deterministic_given_trip_set():
    s = generate_synthetic_scenario(2, 49, 2, 300)
    a = assign(s.network, s.trips, 6)
    b = assign(s.network, list(reversed(s.trips)), 6)
    assert a.trip_times == b.trip_times
    assert np.array_equal(a.link_volumes, b.link_volumes)


def test_threads_do_not_change_results():
    s = generate_synthetic_scenario(2, 49, 2, 300)
    a = assign(s.network, s.trips, 4, threads=1)
    b = assign(s.network, s.trips, 4, threads=4)
    assert a.trip_times == b.trip_times


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000), st.floats(0.1, 0.9))
def test_vehicle_hours_non_increasing_when_trips_removed(seed, keep_share):
    s = generate_synthetic_scenario(seed, 25, 2, 200)
    rng = np.random.default_rng(seed)
    subset = [t for t in s.trips if rng.random() < keep_share]
    full = assign(s.network, s.trips, 20)
    part = assign(s.network, subset, 20)
    assert part.total_vehicle_hours <= full.total_vehicle_hours + 1e-9
