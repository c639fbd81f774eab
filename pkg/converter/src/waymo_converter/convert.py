"""One-way conversion from dataset scenario shards to the interchange format.

Each input shard becomes one JSON-lines file in the output directory, one
scenario per line. Time is re-based so t = 0 is the prediction anchor, agent
types are mapped to the interchange names, speed is the magnitude of the
recorded velocity, and membership in the dataset's tracks-to-predict list
becomes the ttp flag. Records and agents that cannot be converted are skipped
and reported, never silently dropped.
"""

import json
import math
import statistics
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .schema import validate_record
from .tfrecord import RecordError, read_records
from .waymo import OBJECT_TYPE_NAMES, decode_scenario
from .wire import WireError

ANCHOR_MODES = ("current", "start")


@dataclass(frozen=True)
class FileReport:
    """Outcome of converting one shard."""

    path: str
    output_path: Optional[str]
    encountered: int
    emitted: int
    # (record index, reason)
    record_skips: Tuple[Tuple[int, str], ...] = ()
    # (scenario id, track index, reason)
    agent_skips: Tuple[Tuple[str, int, str], ...] = ()
    agents_per_type: Dict[str, int] = field(default_factory=dict)
    error: Optional[str] = None

    def __post_init__(self):
        # every encountered record is either emitted or skipped with a reason
        if self.emitted + len(self.record_skips) != self.encountered:
            raise ValueError("emitted + skipped must equal encountered")

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "output_path": self.output_path,
            "encountered": self.encountered,
            "emitted": self.emitted,
            "record_skips": [list(skip) for skip in self.record_skips],
            "agent_skips": [list(skip) for skip in self.agent_skips],
            "agents_per_type": dict(sorted(self.agents_per_type.items())),
            "error": self.error,
        }


@dataclass(frozen=True)
class ConversionReport:
    """Outcome of one converter invocation over any number of shards."""

    files: Tuple[FileReport, ...]
    anchor: str

    @property
    def files_processed(self) -> int:
        return len(self.files)

    @property
    def scenarios_emitted(self) -> int:
        return sum(f.emitted for f in self.files)

    @property
    def agents_per_type(self) -> Dict[str, int]:
        total: Counter = Counter()
        for f in self.files:
            total.update(f.agents_per_type)
        return dict(sorted(total.items()))

    @property
    def records_skipped(self) -> int:
        return sum(len(f.record_skips) for f in self.files)

    @property
    def agents_skipped(self) -> int:
        return sum(len(f.agent_skips) for f in self.files)

    @property
    def clean(self) -> bool:
        return (self.records_skipped == 0 and self.agents_skipped == 0
                and all(f.error is None for f in self.files))

    def to_dict(self) -> dict:
        return {
            "anchor": self.anchor,
            "files_processed": self.files_processed,
            "scenarios_emitted": self.scenarios_emitted,
            "agents_per_type": self.agents_per_type,
            "records_skipped": self.records_skipped,
            "agents_skipped": self.agents_skipped,
            "files": [f.to_dict() for f in self.files],
        }


def _median_dims(states: Sequence[dict]) -> Optional[Tuple[float, float]]:
    lengths = [s["length"] for s in states if s["valid"] and math.isfinite(s["length"])]
    widths = [s["width"] for s in states if s["valid"] and math.isfinite(s["width"])]
    if not lengths or not widths:
        return None
    length = float(statistics.median(lengths))
    width = float(statistics.median(widths))
    if length <= 0 or width <= 0:
        return None
    return length, width


def _convert_track(track: dict, index: int, timestamps: Sequence[float],
                   anchor_t: float, ttp: int):
    """One decoded track to an interchange track entry, or (None, reason)."""
    type_name = OBJECT_TYPE_NAMES.get(track["object_type"])
    if type_name is None:
        return None, f"unsupported object type {track['object_type']}"
    states = track["states"]
    if len(states) != len(timestamps):
        return None, (f"{len(states)} states for {len(timestamps)} timestamps")

    points = []
    n_valid = 0
    for j, state in enumerate(states):
        numbers = (state["x"], state["y"], state["heading"], state["vx"], state["vy"])
        if state["valid"]:
            if not all(math.isfinite(v) for v in numbers):
                return None, f"non-finite values in valid state {j}"
            n_valid += 1
            x, y, heading = state["x"], state["y"], state["heading"]
            speed = math.hypot(state["vx"], state["vy"])
        else:
            # the slot is kept so indices line up, but the state is untrusted;
            # anything unusable is zeroed rather than propagated
            x = state["x"] if math.isfinite(state["x"]) else 0.0
            y = state["y"] if math.isfinite(state["y"]) else 0.0
            heading = state["heading"] if math.isfinite(state["heading"]) else 0.0
            speed = math.hypot(state["vx"], state["vy"])
            if not math.isfinite(speed):
                speed = 0.0
        points.append({"t_s": timestamps[j] - anchor_t, "x_m": x, "y_m": y,
                       "heading_rad": heading, "speed_mps": speed,
                       "valid": 1 if state["valid"] else 0})
    if n_valid == 0:
        return None, "no valid samples"

    entry = {"id": str(track["id"]), "type": type_name}
    dims = _median_dims(states)
    if dims is not None:
        entry["length_m"], entry["width_m"] = dims
    entry["ttp"] = ttp
    entry["points"] = points
    return entry, None


def convert_scenario(decoded: dict, anchor: str = "current"):
    """Decoded scenario to (record, agent_skips, skip_reason).

    record is None exactly when skip_reason is set; agent_skips lists
    (track index, reason) pairs for agents left out of an emitted record.
    """
    if anchor not in ANCHOR_MODES:
        raise ValueError(f"anchor must be one of {ANCHOR_MODES}")
    scenario_id = decoded["scenario_id"]
    if not scenario_id:
        return None, [], "missing scenario id"
    timestamps = decoded["timestamps"]
    if len(timestamps) < 2:
        return None, [], "fewer than two timestamps"
    if not all(math.isfinite(t) for t in timestamps):
        return None, [], "non-finite timestamps"
    if any(b <= a for a, b in zip(timestamps, timestamps[1:])):
        return None, [], "timestamps not strictly increasing"
    anchor_index = decoded["current_time_index"] if anchor == "current" else 0
    if not 0 <= anchor_index < len(timestamps):
        return None, [], f"current time index {anchor_index} out of range"
    anchor_t = timestamps[anchor_index]
    period = statistics.median(b - a for a, b in zip(timestamps, timestamps[1:]))

    tracks = []
    agent_skips: List[Tuple[int, str]] = []
    seen_ids = set()
    for i, track in enumerate(decoded["tracks"]):
        ttp = 1 if i in decoded["predict_indices"] else 0
        entry, reason = _convert_track(track, i, timestamps, anchor_t, ttp)
        if entry is None:
            agent_skips.append((i, reason))
            continue
        if entry["id"] in seen_ids:
            agent_skips.append((i, f"duplicate id {entry['id']}"))
            continue
        seen_ids.add(entry["id"])
        tracks.append(entry)
    record = {"scenario_id": scenario_id, "sample_period_s": period,
              "tracks": tracks}
    return record, agent_skips, None


def output_name(input_path) -> str:
    # shard names carry index suffixes instead of extensions, so append
    return Path(input_path).name + ".jsonl"


def convert_file(input_path, output_dir, anchor: str = "current") -> FileReport:
    """Convert one shard into output_dir; never raises on shard content."""
    input_path = Path(input_path)
    out_path = Path(output_dir) / output_name(input_path)

    encountered = 0
    emitted = 0
    record_skips: List[Tuple[int, str]] = []
    agent_skips: List[Tuple[str, int, str]] = []
    per_type: Counter = Counter()
    lines: List[str] = []

    try:
        reader = read_records(input_path)
        while True:
            try:
                payload = next(reader)
            except StopIteration:
                break
            except RecordError as exc:
                # the stream cannot be resynchronized past a bad frame
                encountered += 1
                record_skips.append(
                    (exc.index, f"{exc}; remainder of file skipped"))
                break
            index = encountered
            encountered += 1
            try:
                decoded = decode_scenario(payload)
            except WireError as exc:
                record_skips.append((index, f"undecodable record: {exc}"))
                continue
            record, skips, reason = convert_scenario(decoded, anchor)
            if record is None:
                record_skips.append((index, reason))
                continue
            problems = validate_record(record)
            if problems:
                record_skips.append((index, f"schema check failed: {problems[0]}"))
                continue
            for i, skip_reason in skips:
                agent_skips.append((record["scenario_id"], i, skip_reason))
            for track in record["tracks"]:
                per_type[track["type"]] += 1
            lines.append(json.dumps(record, separators=(",", ":")))
            emitted += 1
    except OSError as exc:
        return FileReport(path=str(input_path), output_path=None,
                          encountered=0, emitted=0,
                          error=f"unreadable shard: {exc}")

    out_path.write_text("".join(line + "\n" for line in lines))
    return FileReport(path=str(input_path), output_path=str(out_path),
                      encountered=encountered, emitted=emitted,
                      record_skips=tuple(record_skips),
                      agent_skips=tuple(agent_skips),
                      agents_per_type=dict(per_type))


def convert(input_paths, output_dir, anchor: str = "current") -> ConversionReport:
    """Convert shards into output_dir, one output file per input shard."""
    if anchor not in ANCHOR_MODES:
        raise ValueError(f"anchor must be one of {ANCHOR_MODES}")
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = tuple(convert_file(path, out_dir, anchor) for path in input_paths)
    return ConversionReport(files=reports, anchor=anchor)
