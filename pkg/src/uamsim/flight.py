"""Flight kinematics and runway capacity.

Aircraft fly a climb / cruise / descent profile between runways.  Trips too
short to reach cruise altitude are flown at the mean of the climb and descent
speeds; longer trips add a cruise leg at cruise speed.  Speeds in the travel
time formula are miles per hour, distances are statute miles, and times are
minutes unless a name says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeDistance, NonPositiveRate, NoSuitableAircraft

NM_TO_MI = 1.150779448
METERS_PER_MILE = 1609.344
DEFAULT_ASR_S = 60.0


def climb_descent_geometry(altitude_ft, roc_fpm, rod_fpm, climb_speed, descent_speed):
    """Return ``(t_climb, d_climb, t_descent, d_descent)``.

    Times are minutes; distances come out in the unit of the speeds per hour
    (knots give nautical miles).
    """
    if roc_fpm <= 0 or rod_fpm <= 0:
        raise NonPositiveRate(f"climb/descent rates must be positive, got {roc_fpm}, {rod_fpm}")
    t_climb = altitude_ft / roc_fpm
    t_descent = altitude_ft / rod_fpm
    return t_climb, climb_speed * t_climb / 60.0, t_descent, descent_speed * t_descent / 60.0


@dataclass(frozen=True)
class FlightProfile:
    climb_speed: float = 115.0
    descent_speed: float = 120.0
    cruise_speed: float = 160.0
    cruise_altitude: float = 5000.0
    roc: float = 800.0
    rod: float = 500.0
    # Published climb/descent ground distances in miles.  With
    # recompute_distances the profile derives them from the phase speeds read
    # as knots and converts nm to miles (climb comes out near 13.79, not 12.79).
    stated_climb_distance: float = 12.79
    stated_descent_distance: float = 23.02
    recompute_distances: bool = False

    def geometry(self):
        return climb_descent_geometry(
            self.cruise_altitude, self.roc, self.rod, self.climb_speed, self.descent_speed
        )

    @property
    def t_climb(self):
        return self.geometry()[0]

    @property
    def t_descent(self):
        return self.geometry()[2]

    @property
    def d1(self):
        if self.recompute_distances:
            return self.geometry()[1] * NM_TO_MI
        return self.stated_climb_distance

    @property
    def d2(self):
        if self.recompute_distances:
            return self.geometry()[3] * NM_TO_MI
        return self.stated_descent_distance

    @classmethod
    def from_mapping(cls, values):
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(values) - known
        if unknown:
            raise KeyError(f"unknown flight_profile keys: {sorted(unknown)}")
        return cls(**values)


DEFAULT_PROFILE = FlightProfile()


def flight_time(distance_mi, profile=DEFAULT_PROFILE):
    """Runway-to-runway time in minutes for a flight of ``distance_mi`` miles."""
    if distance_mi < 0:
        raise NegativeDistance(f"distance must be >= 0, got {distance_mi}")
    d1, d2 = profile.d1, profile.d2
    if distance_mi <= d1 + d2:
        return 60.0 * distance_mi / ((profile.climb_speed + profile.descent_speed) / 2.0)
    cruise = distance_mi - d1 - d2
    return profile.t_climb + profile.t_descent + 60.0 * cruise / profile.cruise_speed


def flight_time_array(distance_mi, profile=DEFAULT_PROFILE):
    """Vectorised :func:`flight_time`; NaN in gives NaN out."""
    d = np.asarray(distance_mi, dtype=float)
    if np.any(d < 0):
        raise NegativeDistance("distance must be >= 0")
    d1, d2 = profile.d1, profile.d2
    short = 60.0 * d / ((profile.climb_speed + profile.descent_speed) / 2.0)
    long_ = profile.t_climb + profile.t_descent + 60.0 * (d - d1 - d2) / profile.cruise_speed
    return np.where(d <= d1 + d2, short, long_)


@dataclass(frozen=True)
class AirsideCapacity:
    rot: float
    asr: float
    interval: float
    ops_per_hour: int


def min_interval(aircraft, asr=DEFAULT_ASR_S):
    """Minimum runway operation interval: occupancy time plus separation."""
    if asr <= 0:
        raise ValueError(f"asr must be positive, got {asr}")
    interval = aircraft.runway_occupancy_time + asr
    return AirsideCapacity(
        rot=aircraft.runway_occupancy_time,
        asr=asr,
        interval=interval,
        ops_per_hour=math.floor(3600.0 / interval),
    )


def best_airside_type(longest_runway_ft, catalog, asr=DEFAULT_ASR_S):
    """Largest (most seats) type that fits the runway.

    Ties go to the faster-cycling type, then to the lexicographically smaller name.
    """
    fitting = [a for a in catalog if a.min_runway_length <= longest_runway_ft]
    if not fitting:
        raise NoSuitableAircraft(f"no aircraft fits a {longest_runway_ft} ft runway")

    def key(a):
        return (-a.seats, -min_interval(a, asr).ops_per_hour, a.name)

    return min(fitting, key=key)


def airside_passenger_capacity(airport, catalog, asr=DEFAULT_ASR_S):
    """Passengers per hour the runways can dispatch at the physical minimum interval."""
    longest = max(length for length, _ in airport.runways)
    best = best_airside_type(longest, catalog, asr)
    cap = min_interval(best, asr)
    return len(airport.runways) * cap.ops_per_hour * best.seats


def landside_passenger_capacity(airport):
    return airport.landside_link_capacity * airport.landside_occupancy_factor
