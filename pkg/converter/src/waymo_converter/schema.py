"""Schema check for emitted interchange records.

Deliberately independent of any consumer package: the converter validates its
own output before writing it.
"""

import math
from typing import List

TYPE_NAMES = ("car", "pedestrian", "bicycle")
POINT_FIELDS = ("t_s", "x_m", "y_m", "heading_rad", "speed_mps", "valid")


def _finite(value) -> bool:
    return (isinstance(value, (int, float)) and not isinstance(value, bool)
            and math.isfinite(value))


def validate_record(record) -> List[str]:
    """All schema violations in one pass; an empty list means the record passes."""
    problems: List[str] = []
    if not isinstance(record, dict):
        return ["record must be an object"]

    scenario_id = record.get("scenario_id")
    if not isinstance(scenario_id, str) or not scenario_id:
        problems.append("scenario_id: required non-empty string")

    period = record.get("sample_period_s")
    if not _finite(period) or period <= 0:
        problems.append("sample_period_s: required positive number")

    tracks = record.get("tracks")
    if not isinstance(tracks, list):
        problems.append("tracks: required array")
        return problems

    seen = set()
    for i, track in enumerate(tracks):
        where = f"tracks[{i}]"
        if not isinstance(track, dict):
            problems.append(f"{where}: must be an object")
            continue
        track_id = track.get("id")
        if not isinstance(track_id, str) or not track_id:
            problems.append(f"{where}.id: required non-empty string")
        elif track_id in seen:
            problems.append(f"{where}.id: duplicate {track_id!r}")
        else:
            seen.add(track_id)
        if track.get("type") not in TYPE_NAMES:
            problems.append(f"{where}.type: must be one of {list(TYPE_NAMES)}")
        for name in ("length_m", "width_m"):
            value = track.get(name)
            if value is not None and (not _finite(value) or value <= 0):
                problems.append(f"{where}.{name}: must be a positive number when present")
        ttp = track.get("ttp")
        if ttp is not None and ttp not in (0, 1):
            problems.append(f"{where}.ttp: must be 0 or 1 when present")
        points = track.get("points")
        if not isinstance(points, list) or not points:
            problems.append(f"{where}.points: required non-empty array")
            continue
        previous_t = None
        for j, point in enumerate(points):
            at = f"{where}.points[{j}]"
            if not isinstance(point, dict):
                problems.append(f"{at}: must be an object")
                continue
            for name in POINT_FIELDS[:-1]:
                if not _finite(point.get(name)):
                    problems.append(f"{at}.{name}: must be a finite number")
            if point.get("valid") not in (0, 1):
                problems.append(f"{at}.valid: must be 0 or 1")
            speed = point.get("speed_mps")
            if _finite(speed) and speed < 0:
                problems.append(f"{at}.speed_mps: must be non-negative")
            t = point.get("t_s")
            if _finite(t):
                if previous_t is not None and t <= previous_t:
                    problems.append(f"{at}.t_s: must be strictly increasing")
                previous_t = t
    return problems
