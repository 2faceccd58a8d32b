import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from uamsim.scenario import (  # noqa: E402
    Airport,
    AircraftType,
    GroundNetwork,
    Link,
    ODTrip,
    Scenario,
    ScenarioConfig,
    validate_scenario,
)

DATA = Path(__file__).parent / "data"


def line_network(n, spacing=1000.0, speed=10.0, capacity=1000.0, alpha=0.15, beta=4.0, y=0.0):
    """Bidirectional path n0 - n1 - ... along the x axis."""
    nodes = tuple((f"n{i}", i * spacing, y) for i in range(n))
    links = []
    for i in range(n - 1):
        links.append(Link(f"n{i}", f"n{i + 1}", spacing, speed, capacity, alpha, beta))
        links.append(Link(f"n{i + 1}", f"n{i}", spacing, speed, capacity, alpha, beta))
    return GroundNetwork(nodes, tuple(links))


def small_type(name="Small", seats=4, range_mi=500.0, runway=1000.0, charge=0.0, rot=30.0):
    return AircraftType(name, seats, range_mi, runway, charge, rot)


def airport(aid, anchor, runways=((5000.0, 100.0),), sep=180.0, occupancy=1.67, landside=3000.0, hold=None):
    return Airport(aid, anchor, tuple(runways), sep, occupancy, landside, hold)


def make_scenario(network, airports, trips, aircraft=None, config=None):
    return validate_scenario(Scenario(
        network, tuple(airports), tuple(aircraft or (small_type(),)), tuple(trips), config or ScenarioConfig()))


def far_apart_scenario(trips, n=4, gap_m=160_934.4, config=None, aircraft=None):
    """Two airports ~100 miles apart joined by a slow road: flying wins easily."""
    nodes = (("a", 0.0, 0.0), ("b", gap_m, 0.0))
    slow = 5.0
    links = (Link("a", "b", gap_m, slow, 5000.0, 0.15, 4.0), Link("b", "a", gap_m, slow, 5000.0, 0.15, 4.0))
    net = GroundNetwork(nodes, links)
    aps = [airport("A", "a"), airport("B", "b")]
    return make_scenario(net, aps, trips, aircraft, config)


@pytest.fixture
def demo_config_path():
    return Path(__file__).parent.parent / "src" / "uamsim" / "demo" / "config.toml"


def trip(tid, o, d, dep=28_800.0, party=1):
    return ODTrip(tid, o, d, dep, party)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
