"""Scenario data model: recorded road-user tracks and the JSON-lines interchange format."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import FilterConfig

TWO_PI = 2.0 * math.pi

# Anchor-time tolerance: samples within this of t = 0 count as present at t = 0.
_T_EPS = 1e-9


class RoadUserType(str, Enum):
    CAR = "car"
    PEDESTRIAN = "pedestrian"
    BICYCLE = "bicycle"


class ScenarioParseError(ValueError):
    """The record could not be read as a scenario object at all."""


class ScenarioValidationError(ValueError):
    """Field-level problems in a scenario record; all of them are in `violations`."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def normalize_heading(heading_rad: float) -> float:
    """Wrap a heading into (-pi, pi]."""
    r = math.remainder(heading_rad, TWO_PI)
    return math.pi if r <= -math.pi else r


@dataclass(frozen=True)
class TrackPoint:
    """One recorded sample of an agent's state."""

    t_s: float
    x_m: float
    y_m: float
    heading_rad: float
    speed_mps: float
    valid: bool = True


@dataclass(frozen=True)
class Track:
    """One road user's recorded trajectory plus its physical extent."""

    id: str
    type: RoadUserType
    length_m: float
    width_m: float
    points: Tuple[TrackPoint, ...]
    ttp: Optional[int] = None
    dims_defaulted: bool = field(default=False, compare=False)

    def valid_points(self) -> Tuple[TrackPoint, ...]:
        return tuple(p for p in self.points if p.valid)


@dataclass(frozen=True)
class Scenario:
    """A recorded scene: a set of tracks sampled at a fixed period."""

    scenario_id: str
    sample_period_s: float
    tracks: Tuple[Track, ...]

    def track_by_id(self, track_id: str) -> Track:
        for track in self.tracks:
            if track.id == track_id:
                return track
        raise KeyError(track_id)


@dataclass(frozen=True)
class InitialState:
    """Where prediction starts: the agent's pose and speed at its anchor sample."""

    t_s: float
    x_m: float
    y_m: float
    heading_rad: float
    speed_mps: float
    late_start: bool


def _finite_number(value) -> Optional[float]:
    # bool is an int subclass; reject it as a coordinate value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return None
    out = float(value)
    return out if math.isfinite(out) else None


_TYPE_NAMES = {t.value for t in RoadUserType}
_POINT_FIELDS = ("t_s", "x_m", "y_m", "heading_rad", "speed_mps", "valid")


def _parse_point(raw, where: str, errors: List[str]) -> Optional[TrackPoint]:
    if not isinstance(raw, dict):
        errors.append(f"{where}: must be an object")
        return None
    missing = [name for name in _POINT_FIELDS if name not in raw]
    if missing:
        errors.append(f"{where}: missing field(s) {', '.join(missing)}")
        return None
    ok = True
    nums = {}
    for name in ("t_s", "x_m", "y_m", "heading_rad", "speed_mps"):
        value = _finite_number(raw[name])
        if value is None:
            errors.append(f"{where}.{name}: must be a finite number")
            ok = False
        nums[name] = value
    valid = raw["valid"]
    if isinstance(valid, bool):
        valid = int(valid)
    if valid not in (0, 1):
        errors.append(f"{where}.valid: must be 0 or 1")
        ok = False
    if nums.get("speed_mps") is not None and nums["speed_mps"] < 0:
        errors.append(f"{where}.speed_mps: must be non-negative")
        ok = False
    if not ok:
        return None
    return TrackPoint(
        t_s=nums["t_s"],
        x_m=nums["x_m"],
        y_m=nums["y_m"],
        heading_rad=normalize_heading(nums["heading_rad"]),
        speed_mps=nums["speed_mps"],
        valid=bool(valid),
    )


def _parse_track(raw, index: int, config: FilterConfig, errors: List[str]) -> Optional[Track]:
    where = f"tracks[{index}]"
    if not isinstance(raw, dict):
        errors.append(f"{where}: must be an object")
        return None
    track_id = raw.get("id")
    if not isinstance(track_id, str) or not track_id:
        errors.append(f"{where}.id: required non-empty string")
        track_id = None
    else:
        where = f"track {track_id!r}"

    type_name = raw.get("type")
    if type_name not in _TYPE_NAMES:
        errors.append(
            f"{where}.type: must be one of {sorted(_TYPE_NAMES)}, got {type_name!r}"
        )
        type_name = "car"
    user_type = RoadUserType(type_name)

    dims_defaulted = False
    length = raw.get("length_m")
    width = raw.get("width_m")
    bad_dims = False
    for name, value in (("length_m", length), ("width_m", width)):
        if value is not None and _finite_number(value) is None:
            errors.append(f"{where}.{name}: must be a finite number")
            bad_dims = True
    if not bad_dims:
        # absent or non-positive extents fall back to per-type defaults
        if length is None or width is None or float(length) <= 0 or float(width) <= 0:
            length, width = config.default_dims(type_name)
            dims_defaulted = True
        else:
            length, width = float(length), float(width)
    else:
        length, width = config.default_dims(type_name)
        dims_defaulted = True

    ttp = raw.get("ttp")
    if ttp is not None:
        if isinstance(ttp, bool):
            ttp = int(ttp)
        if ttp not in (0, 1):
            errors.append(f"{where}.ttp: must be 0 or 1")
            ttp = None

    raw_points = raw.get("points")
    points: List[TrackPoint] = []
    if not isinstance(raw_points, list) or not raw_points:
        errors.append(f"{where}.points: required non-empty array")
    else:
        for j, raw_point in enumerate(raw_points):
            point = _parse_point(raw_point, f"{where}.points[{j}]", errors)
            if point is not None:
                points.append(point)
        if len(points) == len(raw_points):
            for j in range(1, len(points)):
                if points[j].t_s <= points[j - 1].t_s:
                    errors.append(f"{where}.points[{j}].t_s: must be strictly increasing")

    if track_id is None or not points or len(points) != len(raw_points or []):
        return None
    return Track(
        id=track_id,
        type=user_type,
        length_m=length,
        width_m=width,
        points=tuple(points),
        ttp=ttp,
        dims_defaulted=dims_defaulted,
    )


def parse_scenario(record, config: Optional[FilterConfig] = None) -> Scenario:
    """Build a validated Scenario from a decoded interchange record.

    Raises ScenarioParseError when the record is not an object, and
    ScenarioValidationError listing every field violation otherwise.
    """
    if config is None:
        config = FilterConfig()
    if not isinstance(record, dict):
        raise ScenarioParseError(
            f"scenario record must be an object, got {type(record).__name__}"
        )
    errors: List[str] = []

    scenario_id = record.get("scenario_id")
    if not isinstance(scenario_id, str) or not scenario_id:
        errors.append("scenario_id: required non-empty string")
        scenario_id = ""

    sample_period = _finite_number(record.get("sample_period_s"))
    if sample_period is None or sample_period <= 0:
        errors.append("sample_period_s: required positive number")
        sample_period = 0.0

    raw_tracks = record.get("tracks")
    tracks: List[Track] = []
    if not isinstance(raw_tracks, list):
        errors.append("tracks: required array")
    else:
        seen_ids = set()
        for i, raw_track in enumerate(raw_tracks):
            # duplicate ids are reported even when the track has other problems
            raw_id = raw_track.get("id") if isinstance(raw_track, dict) else None
            duplicate = False
            if isinstance(raw_id, str) and raw_id:
                if raw_id in seen_ids:
                    errors.append(f"tracks[{i}]: duplicate id {raw_id!r}")
                    duplicate = True
                else:
                    seen_ids.add(raw_id)
            track = _parse_track(raw_track, i, config, errors)
            if track is not None and not duplicate:
                tracks.append(track)

    if errors:
        raise ScenarioValidationError(errors)
    return Scenario(
        scenario_id=scenario_id,
        sample_period_s=sample_period,
        tracks=tuple(tracks),
    )


def serialize_scenario(scenario: Scenario) -> dict:
    """Encode a Scenario back into the interchange record shape."""
    tracks = []
    for track in scenario.tracks:
        record = {
            "id": track.id,
            "type": track.type.value,
            "length_m": track.length_m,
            "width_m": track.width_m,
        }
        if track.ttp is not None:
            record["ttp"] = track.ttp
        record["points"] = [
            {
                "t_s": p.t_s,
                "x_m": p.x_m,
                "y_m": p.y_m,
                "heading_rad": p.heading_rad,
                "speed_mps": p.speed_mps,
                "valid": 1 if p.valid else 0,
            }
            for p in track.points
        ]
        tracks.append(record)
    return {
        "scenario_id": scenario.scenario_id,
        "sample_period_s": scenario.sample_period_s,
        "tracks": tracks,
    }


def scenario_to_line(scenario: Scenario) -> str:
    return json.dumps(serialize_scenario(scenario), separators=(",", ":"), allow_nan=False)


def read_scenarios(path, config: Optional[FilterConfig] = None) -> Iterator[Scenario]:
    """Yield scenarios from a JSON-lines file, tagging errors with the line number."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ScenarioParseError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            try:
                yield parse_scenario(record, config)
            except ScenarioValidationError as exc:
                raise ScenarioValidationError(
                    [f"{path}:{lineno}: {v}" for v in exc.violations]
                ) from None
            except ScenarioParseError as exc:
                raise ScenarioParseError(f"{path}:{lineno}: {exc}") from None


def write_scenarios(path, scenarios: Iterable[Scenario]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for scenario in scenarios:
            fh.write(scenario_to_line(scenario))
            fh.write("\n")


class Path:
    """Polyline through recorded positions, parameterized by arclength.

    Queries past the last vertex extrapolate along the final segment
    direction; negative arclength clamps to the start. A single-vertex path
    extends along its fallback heading.
    """

    def __init__(self, vertices, fallback_heading_rad: float = 0.0):
        verts = np.asarray(vertices, dtype=float).reshape(-1, 2)
        if verts.shape[0] == 0:
            raise ValueError("path needs at least one vertex")
        diffs = np.diff(verts, axis=0)
        seg_len = np.hypot(diffs[:, 0], diffs[:, 1])
        if np.any(seg_len == 0.0):
            raise ValueError("path has a zero-length segment")
        self.vertices = verts
        self._seg_len = seg_len
        self.cum_arclength = np.concatenate(([0.0], np.cumsum(seg_len)))
        if seg_len.size:
            self._unit = diffs / seg_len[:, None]
            self._seg_heading = np.arctan2(diffs[:, 1], diffs[:, 0])
        else:
            h = float(fallback_heading_rad)
            self._unit = np.array([[math.cos(h), math.sin(h)]])
            self._seg_heading = np.array([h])

    @property
    def length(self) -> float:
        return float(self.cum_arclength[-1])

    def _segment_index(self, s_arr: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.cum_arclength, s_arr, side="right") - 1
        return np.clip(idx, 0, len(self._unit) - 1)

    def position_at(self, s) -> np.ndarray:
        """Point at arclength s (scalar or array), clamped at the start."""
        s_arr = np.maximum(np.asarray(s, dtype=float), 0.0)
        idx = self._segment_index(s_arr)
        local = s_arr - self.cum_arclength[idx]
        start_idx = np.minimum(idx, len(self.vertices) - 1)
        return self.vertices[start_idx] + self._unit[idx] * local[..., None]

    def heading_at(self, s) -> np.ndarray:
        """Tangent heading at arclength s; past the end, the final segment heading."""
        s_arr = np.maximum(np.asarray(s, dtype=float), 0.0)
        return self._seg_heading[self._segment_index(s_arr)]

    def project(self, x: float, y: float) -> float:
        """Arclength of the closest point on the path (first segment wins ties)."""
        point = np.array([x, y], dtype=float)
        if len(self.vertices) == 1:
            return 0.0
        starts = self.vertices[:-1]
        offsets = point - starts
        along = np.einsum("ij,ij->i", offsets, self._unit)
        along = np.clip(along, 0.0, self._seg_len)
        closest = starts + self._unit * along[:, None]
        dist2 = np.sum((closest - point) ** 2, axis=1)
        best = int(np.argmin(dist2))
        return float(self.cum_arclength[best] + along[best])


def extract_path(track: Track, eps_dedupe_m: float = 0.05) -> Path:
    """Polyline through the track's valid positions.

    Consecutive samples closer than eps_dedupe_m collapse into one vertex so
    near-standstill jitter does not bend the path.
    """
    points = track.valid_points()
    if not points:
        raise ValueError(f"track {track.id!r} has no valid points")
    kept = [(points[0].x_m, points[0].y_m)]
    for p in points[1:]:
        dist = math.hypot(p.x_m - kept[-1][0], p.y_m - kept[-1][1])
        if dist < eps_dedupe_m or dist == 0.0:
            continue
        kept.append((p.x_m, p.y_m))
    fallback = points[0].heading_rad if len(kept) == 1 else 0.0
    return Path(np.array(kept, dtype=float), fallback_heading_rad=fallback)


def initial_state(track: Track) -> Optional[InitialState]:
    """Anchor state for prediction: the earliest valid sample at or after t = 0.

    Tracks valid only before t = 0 fall back to their latest valid sample.
    late_start is set whenever the anchor time is not 0, so late appearers and
    early leavers are both flagged. Returns None when no sample is valid.
    """
    valid = [p for p in track.points if p.valid]
    if not valid:
        return None
    at_or_after = [p for p in valid if p.t_s >= -_T_EPS]
    anchor = at_or_after[0] if at_or_after else valid[-1]
    return InitialState(
        t_s=anchor.t_s,
        x_m=anchor.x_m,
        y_m=anchor.y_m,
        heading_rad=anchor.heading_rad,
        speed_mps=anchor.speed_mps,
        late_start=abs(anchor.t_s) > _T_EPS,
    )
