"""Synthetic scenario generators for tests, demos, and benchmarks."""

from __future__ import annotations

import math
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import FilterConfig
from .scenario import RoadUserType, Scenario, Track, TrackPoint, normalize_heading

_DEFAULT_PERIOD_S = 0.1


def _dims_for(user_type: RoadUserType) -> Tuple[float, float]:
    return FilterConfig().default_dims(user_type.value)


def _make_track(
    track_id: str,
    user_type: RoadUserType,
    points: Sequence[TrackPoint],
    length_m: Optional[float],
    width_m: Optional[float],
    ttp: Optional[int],
) -> Track:
    default_length, default_width = _dims_for(user_type)
    return Track(
        id=track_id,
        type=user_type,
        length_m=default_length if length_m is None else length_m,
        width_m=default_width if width_m is None else width_m,
        points=tuple(points),
        ttp=ttp,
    )


def straight_track(
    track_id: str,
    user_type: RoadUserType = RoadUserType.CAR,
    start: Tuple[float, float] = (0.0, 0.0),
    heading_rad: float = 0.0,
    speed_mps: float = 10.0,
    duration_s: float = 9.0,
    period_s: float = _DEFAULT_PERIOD_S,
    t0_s: float = 0.0,
    length_m: Optional[float] = None,
    width_m: Optional[float] = None,
    ttp: Optional[int] = None,
    valid_mask: Optional[Sequence[bool]] = None,
) -> Track:
    """Constant-velocity straight-line track sampled every period_s."""
    n = int(round(duration_s / period_s))
    heading = normalize_heading(heading_rad)
    cos_h, sin_h = math.cos(heading), math.sin(heading)
    points = []
    for k in range(n + 1):
        t = t0_s + k * period_s
        d = speed_mps * k * period_s
        valid = True if valid_mask is None else bool(valid_mask[k])
        points.append(
            TrackPoint(
                t_s=t,
                x_m=start[0] + d * cos_h,
                y_m=start[1] + d * sin_h,
                heading_rad=heading,
                speed_mps=speed_mps,
                valid=valid,
            )
        )
    return _make_track(track_id, user_type, points, length_m, width_m, ttp)


def arc_track(
    track_id: str,
    user_type: RoadUserType = RoadUserType.CAR,
    center: Tuple[float, float] = (0.0, 0.0),
    radius_m: float = 20.0,
    start_angle_rad: float = -math.pi / 2,
    speed_mps: float = 5.0,
    duration_s: float = 9.0,
    period_s: float = _DEFAULT_PERIOD_S,
    ccw: bool = True,
    t0_s: float = 0.0,
    length_m: Optional[float] = None,
    width_m: Optional[float] = None,
    ttp: Optional[int] = None,
) -> Track:
    """Constant-speed circular-arc track; heading follows the tangent."""
    n = int(round(duration_s / period_s))
    omega = (speed_mps / radius_m) * (1.0 if ccw else -1.0)
    tangent_offset = math.pi / 2 if ccw else -math.pi / 2
    points = []
    for k in range(n + 1):
        t = t0_s + k * period_s
        angle = start_angle_rad + omega * k * period_s
        points.append(
            TrackPoint(
                t_s=t,
                x_m=center[0] + radius_m * math.cos(angle),
                y_m=center[1] + radius_m * math.sin(angle),
                heading_rad=normalize_heading(angle + tangent_offset),
                speed_mps=speed_mps,
                valid=True,
            )
        )
    return _make_track(track_id, user_type, points, length_m, width_m, ttp)


def stationary_track(
    track_id: str,
    user_type: RoadUserType = RoadUserType.CAR,
    position: Tuple[float, float] = (0.0, 0.0),
    heading_rad: float = 0.0,
    duration_s: float = 9.0,
    period_s: float = _DEFAULT_PERIOD_S,
    t0_s: float = 0.0,
    ttp: Optional[int] = None,
) -> Track:
    """Track that never moves; speed is recorded as zero."""
    n = int(round(duration_s / period_s))
    heading = normalize_heading(heading_rad)
    points = [
        TrackPoint(
            t_s=t0_s + k * period_s,
            x_m=position[0],
            y_m=position[1],
            heading_rad=heading,
            speed_mps=0.0,
            valid=True,
        )
        for k in range(n + 1)
    ]
    return _make_track(track_id, user_type, points, None, None, ttp)


def make_scenario(
    scenario_id: str,
    tracks: Sequence[Track],
    sample_period_s: float = _DEFAULT_PERIOD_S,
) -> Scenario:
    return Scenario(
        scenario_id=scenario_id,
        sample_period_s=sample_period_s,
        tracks=tuple(tracks),
    )


def head_on_scenario(
    gap_m: float = 80.0,
    speed_mps: float = 10.0,
    duration_s: float = 9.0,
    period_s: float = _DEFAULT_PERIOD_S,
) -> Scenario:
    """Two cars in the same lane driving straight at each other."""
    a = straight_track("ego", heading_rad=0.0, speed_mps=speed_mps,
                       duration_s=duration_s, period_s=period_s)
    b = straight_track("oncoming", start=(gap_m, 0.0), heading_rad=math.pi,
                       speed_mps=speed_mps, duration_s=duration_s, period_s=period_s)
    return make_scenario("head_on", [a, b], period_s)


def parallel_scenario(
    offset_m: float = 50.0,
    speed_mps: float = 10.0,
    duration_s: float = 9.0,
    period_s: float = _DEFAULT_PERIOD_S,
) -> Scenario:
    """Two cars on widely separated parallel lanes, same direction."""
    a = straight_track("left", start=(0.0, 0.0), speed_mps=speed_mps,
                       duration_s=duration_s, period_s=period_s)
    b = straight_track("right", start=(0.0, offset_m), speed_mps=speed_mps,
                       duration_s=duration_s, period_s=period_s)
    return make_scenario("parallel", [a, b], period_s)


def crossing_scenario(
    speed_mps: float = 10.0,
    approach_m: float = 40.0,
    duration_s: float = 9.0,
    period_s: float = _DEFAULT_PERIOD_S,
) -> Scenario:
    """Two cars on perpendicular courses through the same point."""
    a = straight_track("eastbound", start=(-approach_m, 0.0), heading_rad=0.0,
                       speed_mps=speed_mps, duration_s=duration_s, period_s=period_s)
    b = straight_track("northbound", start=(0.0, -approach_m), heading_rad=math.pi / 2,
                       speed_mps=speed_mps, duration_s=duration_s, period_s=period_s)
    return make_scenario("crossing", [a, b], period_s)


def chain_scenario(duration_s: float = 9.0, period_s: float = _DEFAULT_PERIOD_S) -> Scenario:
    """Three agents where ego conflicts with first and first with second.

    Ego heads east toward the point the southbound first agent is steering
    through; the slow second agent is ahead on the first agent's course but
    far off to the side of ego's lane.
    """
    ego = straight_track("ego", start=(-40.0, 0.0), heading_rad=0.0, speed_mps=10.0,
                         duration_s=duration_s, period_s=period_s)
    first = straight_track("first", start=(0.0, 60.0), heading_rad=-math.pi / 2,
                           speed_mps=10.0, duration_s=duration_s, period_s=period_s)
    # a pedestrian's tight uncertainty keeps the ego-second link negligible
    second = straight_track("second", RoadUserType.PEDESTRIAN, start=(0.0, -40.0),
                            heading_rad=-math.pi / 2, speed_mps=1.0,
                            duration_s=duration_s, period_s=period_s)
    return make_scenario("chain", [ego, first, second], period_s)


_TYPE_POOL = (
    RoadUserType.CAR, RoadUserType.CAR, RoadUserType.CAR,
    RoadUserType.PEDESTRIAN, RoadUserType.BICYCLE,
)
_SPEED_RANGE = {
    RoadUserType.CAR: (0.0, 20.0),
    RoadUserType.PEDESTRIAN: (0.0, 2.5),
    RoadUserType.BICYCLE: (0.0, 8.0),
}


def random_scenario(
    seed: int,
    n_agents: Optional[int] = None,
    duration_s: float = 9.0,
    period_s: float = _DEFAULT_PERIOD_S,
    spread_m: float = 60.0,
) -> Scenario:
    """Reproducible random scene: straight, arcing, and stationary agents."""
    rng = np.random.default_rng(seed)
    count = int(rng.integers(2, 13)) if n_agents is None else n_agents
    tracks = []
    for i in range(count):
        track_id = f"a{i:02d}"
        user_type = _TYPE_POOL[int(rng.integers(len(_TYPE_POOL)))]
        lo, hi = _SPEED_RANGE[user_type]
        speed = float(rng.uniform(lo, hi))
        start = (float(rng.uniform(-spread_m, spread_m)),
                 float(rng.uniform(-spread_m, spread_m)))
        heading = float(rng.uniform(-math.pi, math.pi))
        ttp = int(rng.integers(0, 2)) if rng.random() < 0.5 else None
        kind = rng.random()
        if kind < 0.15 or speed < 0.05:
            track = stationary_track(track_id, user_type, position=start,
                                     heading_rad=heading, duration_s=duration_s,
                                     period_s=period_s, ttp=ttp)
        elif kind < 0.40:
            radius = float(rng.uniform(8.0, 60.0))
            ccw = bool(rng.random() < 0.5)
            # center sits 90 degrees to the side so the arc starts at `start`
            # with tangent direction `heading`
            side = heading + (math.pi / 2 if ccw else -math.pi / 2)
            center = (start[0] + radius * math.cos(side),
                      start[1] + radius * math.sin(side))
            track = arc_track(track_id, user_type, center=center, radius_m=radius,
                              start_angle_rad=heading - (math.pi / 2 if ccw else -math.pi / 2),
                              speed_mps=max(speed, 0.1),
                              duration_s=duration_s, period_s=period_s,
                              ccw=ccw, ttp=ttp)
        else:
            t0 = float(rng.uniform(0.5, 2.0)) if rng.random() < 0.1 else 0.0
            track = straight_track(track_id, user_type, start=start,
                                   heading_rad=heading, speed_mps=speed,
                                   duration_s=duration_s, period_s=period_s,
                                   t0_s=t0, ttp=ttp)
        if rng.random() < 0.1 and len(track.points) > 4:
            # knock out a couple of interior samples
            drop = set(int(j) for j in rng.integers(1, len(track.points) - 1, size=2))
            points = tuple(
                TrackPoint(p.t_s, p.x_m, p.y_m, p.heading_rad, p.speed_mps,
                           valid=p.valid and j not in drop)
                for j, p in enumerate(track.points)
            )
            track = Track(id=track.id, type=track.type, length_m=track.length_m,
                          width_m=track.width_m, points=points, ttp=track.ttp)
        tracks.append(track)
    return make_scenario(f"rand{seed:05d}", tracks, period_s)


def transform_scenario(scenario: Scenario, rotation_rad: float, dx: float, dy: float) -> Scenario:
    """Apply one rigid motion (rotate about the origin, then translate) to every track."""
    cos_r, sin_r = math.cos(rotation_rad), math.sin(rotation_rad)
    tracks = []
    for track in scenario.tracks:
        points = tuple(
            TrackPoint(
                t_s=p.t_s,
                x_m=cos_r * p.x_m - sin_r * p.y_m + dx,
                y_m=sin_r * p.x_m + cos_r * p.y_m + dy,
                heading_rad=normalize_heading(p.heading_rad + rotation_rad),
                speed_mps=p.speed_mps,
                valid=p.valid,
            )
            for p in track.points
        )
        tracks.append(Track(id=track.id, type=track.type, length_m=track.length_m,
                            width_m=track.width_m, points=points, ttp=track.ttp,
                            dims_defaulted=track.dims_defaulted))
    return Scenario(scenario_id=scenario.scenario_id,
                    sample_period_s=scenario.sample_period_s,
                    tracks=tuple(tracks))
