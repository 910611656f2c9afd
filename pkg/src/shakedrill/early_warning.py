"""Wave arrival times at a drill site and the preparedness countdown.

A point-source rupture with constant P and S speeds; the usable warning is
the S-wave arrival delay minus the alerting latency. The engine reports the
signed value (negative means no warning is possible); display layers clamp
at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gm_field import SitePoint, distance_km


class InvalidTickError(ValueError):
    pass


@dataclass(frozen=True)
class RuptureScenario:
    """Point-source rupture for countdown purposes, on a zero-based scenario clock."""

    epicenter: SitePoint
    p_speed: float = 6.0
    s_speed: float = 3.2
    alert_latency: float = 5.0
    origin_time: float = 0.0
    name: str = ""

    def __post_init__(self) -> None:
        if not self.p_speed > self.s_speed > 0.0:
            raise ValueError(
                f"need p_speed > s_speed > 0, got p={self.p_speed}, s={self.s_speed}"
            )
        if not (math.isfinite(self.alert_latency) and self.alert_latency >= 0.0):
            raise ValueError(f"alert latency must be >= 0, got {self.alert_latency}")
        if not math.isfinite(self.origin_time):
            raise ValueError(f"origin time must be finite, got {self.origin_time}")


@dataclass(frozen=True)
class WarningEstimate:
    """Arrival times on the scenario clock; warning_time is signed (negative = no warning)."""

    distance_km: float
    p_arrival: float
    s_arrival: float
    warning_time: float


def warning_for_distance(sc: RuptureScenario, distance: float) -> WarningEstimate:
    """WarningEstimate for a known epicentral distance in km."""
    if not (math.isfinite(distance) and distance >= 0.0):
        raise ValueError(f"distance must be >= 0, got {distance}")
    return WarningEstimate(
        distance_km=distance,
        p_arrival=sc.origin_time + distance / sc.p_speed,
        s_arrival=sc.origin_time + distance / sc.s_speed,
        warning_time=distance / sc.s_speed - sc.alert_latency,
    )


def arrival_times(sc: RuptureScenario, site: SitePoint) -> WarningEstimate:
    """WarningEstimate for a site, with the epicentral distance from the haversine."""
    return warning_for_distance(sc, distance_km(sc.epicenter, site))


def countdown_track(est: WarningEstimate, tick: float) -> list[float]:
    """Remaining-seconds sequence for the on-screen timer, clamped at a single terminal 0.

    warning_time <= 0 yields [0.0]: the display shows zero immediately.
    """
    if not (math.isfinite(tick) and tick > 0.0):
        raise InvalidTickError(f"tick must be positive, got {tick}")
    track: list[float] = []
    k = 0
    while True:
        remaining = max(est.warning_time - k * tick, 0.0)
        track.append(remaining)
        if remaining == 0.0:
            return track
        k += 1
