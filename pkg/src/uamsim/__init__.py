"""Urban air mobility demand equilibrium and minimum fleet sizing."""

from .dispatch import UamItinerary, select_aircraft, simulate_departures, uam_travel_time
from .equilibrium import run_to_equilibrium
from .fleet import FlightTask, build_graph, generate_tasks, size_combined, size_homogeneous, solve_min_fleet
from .flight import FlightProfile, flight_time, min_interval
from .ground import assign, baseline_driving_times
from .scenario import ScenarioConfig, generate_synthetic_scenario, load_scenario

__all__ = [
    "FlightProfile", "FlightTask", "ScenarioConfig", "UamItinerary", "assign", "baseline_driving_times",
    "build_graph", "flight_time", "generate_synthetic_scenario", "generate_tasks", "load_scenario",
    "min_interval", "run_to_equilibrium", "select_aircraft", "simulate_departures", "size_combined",
    "size_homogeneous", "solve_min_fleet", "uam_travel_time",
]
