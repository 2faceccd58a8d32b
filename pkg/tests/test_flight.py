import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from uamsim.errors import NegativeDistance, NonPositiveRate, NoSuitableAircraft
from uamsim.flight import (
    NM_TO_MI,
    FlightProfile,
    airside_passenger_capacity,
    best_airside_type,
    climb_descent_geometry,
    flight_time,
    landside_passenger_capacity,
    min_interval,
)

from conftest import airport, small_type

PROFILE = FlightProfile()


def test_climb_and_descent_times_match_stated_values():
    t_climb, _, t_descent, _ = climb_descent_geometry(5000, 800, 500, 115, 120)
    assert t_climb == pytest.approx(6.25, rel=1e-9)
    assert t_descent == pytest.approx(10.0, rel=1e-9)


def test_descent_distance_in_nautical_miles_converts_to_stated_miles():
    _, _, t_descent, d2 = climb_descent_geometry(5000, 800, 500, 115, 120)
    assert d2 == pytest.approx(120 * 10 / 60)
    assert d2 * NM_TO_MI == pytest.approx(23.02, abs=0.005)


def test_zero_altitude_is_degenerate():
    t_climb, d1, t_descent, d2 = climb_descent_geometry(0, 800, 500, 115, 120)
    assert (t_climb, d1, t_descent, d2) == (0, 0, 0, 0)


@pytest.mark.parametrize("roc,rod", [(0, 500), (800, 0), (-1, 500)])
def test_non_positive_rates_rejected(roc, rod):
    with pytest.raises(NonPositiveRate):
        climb_descent_geometry(5000, roc, rod, 115, 120)


def test_default_profile_uses_stated_distances():
    assert PROFILE.d1 == 12.79
    assert PROFILE.d2 == 23.02


def test_recomputed_climb_distance():
    p = FlightProfile(recompute_distances=True)
    assert p.d1 == pytest.approx(115 * 6.25 / 60 * NM_TO_MI, rel=1e-12)
    assert p.d1 == pytest.approx(13.79, abs=0.01)


def test_flight_time_long_branch_100_miles():
    expected = 6.25 + 10 + 60 * (100 - 35.81) / 160
    assert flight_time(100, PROFILE) == pytest.approx(expected, abs=1e-9)
    assert flight_time(100, PROFILE) == pytest.approx(40.32, abs=0.01)


def test_flight_time_short_branch_at_boundary():
    assert flight_time(35.81, PROFILE) == pytest.approx(60 * 35.81 / 117.5, abs=1e-9)
    assert flight_time(35.81, PROFILE) == pytest.approx(18.29, abs=0.01)


def test_flight_time_zero_and_negative():
    assert flight_time(0, PROFILE) == 0
    with pytest.raises(NegativeDistance):
        flight_time(-1, PROFILE)


@given(st.floats(0, 35.8), st.floats(0.001, 10))
def test_short_branch_increasing(d, step):
    d2 = min(d + step, 35.81)
    if d2 > d:
        assert flight_time(d2) > flight_time(d)


@given(st.floats(35.9, 500), st.floats(0.001, 100))
def test_long_branch_increasing(d, step):
    assert flight_time(d + step) > flight_time(d)
    assert flight_time(d) >= 0


@pytest.mark.parametrize("d", [50.0, 120.0, 300.0])
def test_long_branch_slope_is_inverse_cruise_speed(d):
    h = 1e-3
    slope = (flight_time(d + h) - flight_time(d - h)) / (2 * h)
    assert slope == pytest.approx(60 / 160, rel=1e-6)


@given(st.floats(0, 10_000), st.floats(1, 3000), st.floats(1, 3000), st.floats(1, 300))
def test_climb_distance_consistent_with_time(alt, roc, rod, v1):
    t_climb, d1, _, _ = climb_descent_geometry(alt, roc, rod, v1, 120)
    if d1:
        assert d1 / v1 == pytest.approx(t_climb / 60, rel=1e-9)


def test_min_interval_anchor():
    cap = min_interval(small_type(rot=30), asr=60)
    assert (cap.interval, cap.ops_per_hour) == (90, 40)
    cap = min_interval(small_type(rot=60), asr=60)
    assert (cap.interval, cap.ops_per_hour) == (120, 30)
    with pytest.raises(ValueError):
        min_interval(small_type(rot=30), asr=0)


def test_airside_capacity_single_runway():
    catalog = [small_type("Nine", 9, runway=2000, rot=30), small_type("Big", 78, runway=4600, rot=30)]
    ap = airport("X", "n0", runways=[(5000, 100)])
    assert airside_passenger_capacity(ap, catalog, 60) == 40 * 78 == 3120


def test_airside_capacity_uses_largest_type_even_if_slower():
    # 19 seats every 60 s beats 20 seats every 180 s on throughput, but the larger type sets capacity
    catalog = [small_type("Quick", 19, runway=2000, rot=0.0), small_type("Roomy", 20, runway=2000, rot=120.0)]
    ap = airport("X", "n0", runways=[(3000, 100)])
    assert best_airside_type(3000, catalog, 60).name == "Roomy"
    assert airside_passenger_capacity(ap, catalog, 60) == 20 * 20


def test_airside_type_tie_on_seats_prefers_faster_cycle():
    catalog = [small_type("Slow", 20, runway=2000, rot=60.0), small_type("Fast", 20, runway=2000, rot=30.0)]
    assert best_airside_type(3000, catalog, 60).name == "Fast"


def test_airside_capacity_linear_in_runway_count():
    catalog = [small_type("Big", 78, runway=4600, rot=30)]
    one = airside_passenger_capacity(airport("X", "n0", runways=[(5000, 100)]), catalog)
    two = airside_passenger_capacity(airport("X", "n0", runways=[(5000, 100), (5000, 100)]), catalog)
    assert two == 2 * one


def test_airside_capacity_no_suitable_aircraft():
    with pytest.raises(NoSuitableAircraft):
        airside_passenger_capacity(airport("X", "n0", runways=[(1000, 50)]), [small_type(runway=2400)])


@given(st.lists(st.floats(600, 8000), min_size=1, max_size=4), st.floats(0, 2000), st.integers(0, 3))
def test_airside_capacity_monotone(lengths, extend, extra_runways):
    catalog = [small_type("A", 3, runway=600, rot=30), small_type("B", 19, runway=2600, rot=40),
               small_type("C", 78, runway=4600, rot=45), small_type("D", 90, runway=6000, rot=50)]
    base = airport("X", "n0", runways=[(l, 100) for l in lengths])
    longer = airport("X", "n0", runways=[(l + extend, 100) for l in lengths])
    more = airport("X", "n0", runways=[(l, 100) for l in lengths] + [(500, 100)] * extra_runways)
    cap = airside_passenger_capacity(base, catalog)
    assert airside_passenger_capacity(longer, catalog) >= cap
    assert airside_passenger_capacity(more, catalog) >= cap


def test_landside_capacity():
    assert landside_passenger_capacity(airport("X", "n0", landside=3000, occupancy=1.67)) == pytest.approx(5010)
    assert landside_passenger_capacity(airport("X", "n0", landside=3000, occupancy=1.0)) == 3000
    assert landside_passenger_capacity(airport("X", "n0", landside=0)) == 0


def test_discontinuity_at_branch_switch_is_as_specified():
    # the short branch just below d1+d2 is slower than the long branch just above
    edge = PROFILE.d1 + PROFILE.d2
    assert flight_time(edge) == pytest.approx(60 * edge / 117.5)
    assert flight_time(math.nextafter(edge, math.inf)) == pytest.approx(16.25, abs=1e-9)
