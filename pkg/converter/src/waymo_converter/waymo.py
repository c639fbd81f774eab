"""Decoders for the motion dataset's scenario records.

Field numbers are hand-mapped from the dataset's published schema, so the
converter needs no generated protobuf code and no protobuf runtime. Only the
fields the interchange format uses are decoded; map features, signals, and
everything else are skipped by field number.
"""

from typing import Dict, List, Set

from .wire import (
    FIXED32,
    FIXED64,
    LENGTH_DELIMITED,
    VARINT,
    WireError,
    as_double,
    as_float,
    as_signed,
    iter_fields,
    unpack_packed_doubles,
)

SCENARIO_TIMESTAMPS = 1
SCENARIO_TRACKS = 2
SCENARIO_ID = 5
SCENARIO_CURRENT_TIME_INDEX = 10
SCENARIO_TRACKS_TO_PREDICT = 11

PREDICTION_TRACK_INDEX = 1

TRACK_ID = 1
TRACK_OBJECT_TYPE = 2
TRACK_STATES = 3

STATE_CENTER_X = 2
STATE_CENTER_Y = 3
STATE_LENGTH = 5
STATE_WIDTH = 6
STATE_HEADING = 8
STATE_VELOCITY_X = 9
STATE_VELOCITY_Y = 10
STATE_VALID = 11

# dataset enum values for the agent types the interchange format carries
OBJECT_TYPE_NAMES = {1: "car", 2: "pedestrian", 3: "bicycle"}

_STATE_DOUBLES = {STATE_CENTER_X: "x", STATE_CENTER_Y: "y"}
_STATE_FLOATS = {
    STATE_LENGTH: "length",
    STATE_WIDTH: "width",
    STATE_HEADING: "heading",
    STATE_VELOCITY_X: "vx",
    STATE_VELOCITY_Y: "vy",
}


def decode_state(data: bytes) -> Dict[str, object]:
    state = {"x": 0.0, "y": 0.0, "length": 0.0, "width": 0.0,
             "heading": 0.0, "vx": 0.0, "vy": 0.0, "valid": False}
    for field, wire_type, raw in iter_fields(data):
        if field in _STATE_DOUBLES and wire_type == FIXED64:
            state[_STATE_DOUBLES[field]] = as_double(raw)
        elif field in _STATE_FLOATS and wire_type == FIXED32:
            state[_STATE_FLOATS[field]] = as_float(raw)
        elif field == STATE_VALID and wire_type == VARINT:
            state["valid"] = raw != 0
    return state


def decode_track(data: bytes) -> Dict[str, object]:
    track = {"id": 0, "object_type": 0, "states": []}
    for field, wire_type, raw in iter_fields(data):
        if field == TRACK_ID and wire_type == VARINT:
            track["id"] = as_signed(raw)
        elif field == TRACK_OBJECT_TYPE and wire_type == VARINT:
            track["object_type"] = as_signed(raw)
        elif field == TRACK_STATES and wire_type == LENGTH_DELIMITED:
            track["states"].append(decode_state(raw))
    return track


def _decode_prediction_index(data: bytes) -> int:
    for field, wire_type, raw in iter_fields(data):
        if field == PREDICTION_TRACK_INDEX and wire_type == VARINT:
            return as_signed(raw)
    return -1


def decode_scenario(data: bytes) -> Dict[str, object]:
    """Decode one scenario record into plain Python values.

    Raises WireError on malformed bytes; unknown fields are ignored.
    """
    timestamps: List[float] = []
    tracks: List[Dict[str, object]] = []
    predict_indices: Set[int] = set()
    scenario = {"scenario_id": "", "current_time_index": 0,
                "timestamps": timestamps, "tracks": tracks,
                "predict_indices": predict_indices}
    for field, wire_type, raw in iter_fields(data):
        if field == SCENARIO_ID and wire_type == LENGTH_DELIMITED:
            scenario["scenario_id"] = raw.decode("utf-8", errors="replace")
        elif field == SCENARIO_TIMESTAMPS:
            # repeated doubles may arrive packed or one by one
            if wire_type == LENGTH_DELIMITED:
                timestamps.extend(unpack_packed_doubles(raw))
            elif wire_type == FIXED64:
                timestamps.append(as_double(raw))
            else:
                raise WireError("timestamps with unexpected wire type")
        elif field == SCENARIO_CURRENT_TIME_INDEX and wire_type == VARINT:
            scenario["current_time_index"] = as_signed(raw)
        elif field == SCENARIO_TRACKS and wire_type == LENGTH_DELIMITED:
            tracks.append(decode_track(raw))
        elif field == SCENARIO_TRACKS_TO_PREDICT and wire_type == LENGTH_DELIMITED:
            index = _decode_prediction_index(raw)
            if index >= 0:
                predict_indices.add(index)
    return scenario
