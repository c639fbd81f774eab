"""Interchange parsing, validation, serialization, and path geometry."""

import json
import math

import numpy as np
import pytest

from risk_sieve.config import FilterConfig
from risk_sieve.scenario import (
    Path,
    RoadUserType,
    ScenarioParseError,
    ScenarioValidationError,
    extract_path,
    initial_state,
    normalize_heading,
    parse_scenario,
    read_scenarios,
    scenario_to_line,
    serialize_scenario,
    write_scenarios,
)
from risk_sieve.synthetic import straight_track


def _point(t, x, y, heading=0.0, speed=5.0, valid=1):
    return {"t_s": t, "x_m": x, "y_m": y, "heading_rad": heading,
            "speed_mps": speed, "valid": valid}


def _record(**overrides):
    record = {
        "scenario_id": "s1",
        "sample_period_s": 0.1,
        "tracks": [
            {
                "id": "a",
                "type": "car",
                "length_m": 4.5,
                "width_m": 1.9,
                "ttp": 1,
                "points": [_point(0.0, 0.0, 0.0), _point(0.1, 0.5, 0.0)],
            },
            {
                "id": "b",
                "type": "pedestrian",
                "length_m": 0.7,
                "width_m": 0.7,
                "points": [_point(0.0, 3.0, 4.0, speed=1.0),
                           _point(0.1, 3.1, 4.0, speed=1.0, valid=0)],
            },
        ],
    }
    record.update(overrides)
    return record


def test_parse_and_round_trip():
    scenario = parse_scenario(_record())
    assert scenario.scenario_id == "s1"
    assert scenario.tracks[0].type is RoadUserType.CAR
    assert scenario.tracks[0].ttp == 1
    assert scenario.tracks[1].ttp is None
    assert scenario.tracks[1].points[1].valid is False

    again = parse_scenario(serialize_scenario(scenario))
    assert again == scenario

    line = scenario_to_line(scenario)
    assert parse_scenario(json.loads(line)) == scenario


def test_missing_dims_fall_back_to_type_defaults():
    record = _record()
    del record["tracks"][0]["length_m"]
    del record["tracks"][0]["width_m"]
    record["tracks"][1]["length_m"] = -1.0
    scenario = parse_scenario(record)
    cfg = FilterConfig()
    assert (scenario.tracks[0].length_m, scenario.tracks[0].width_m) == cfg.default_dims("car")
    assert scenario.tracks[0].dims_defaulted is True
    assert (scenario.tracks[1].length_m, scenario.tracks[1].width_m) == cfg.default_dims("pedestrian")
    assert scenario.tracks[1].dims_defaulted is True
    # defaulting is an annotation, not part of identity
    assert parse_scenario(serialize_scenario(scenario)) == scenario


def test_validation_lists_every_violation():
    record = _record()
    record["tracks"][0]["id"] = "b"  # collides with the second track
    record["tracks"][1]["type"] = "horse"
    record["tracks"][1]["points"][0]["speed_mps"] = -2.0
    record["sample_period_s"] = 0
    with pytest.raises(ScenarioValidationError) as err:
        parse_scenario(record)
    message = str(err.value)
    assert "duplicate id" in message
    assert "horse" in message
    assert "speed_mps" in message
    assert "sample_period_s" in message
    assert len(err.value.violations) >= 4


def test_time_must_increase_and_heading_is_normalized():
    record = _record()
    record["tracks"][0]["points"] = [_point(0.0, 0.0, 0.0), _point(0.0, 1.0, 0.0)]
    with pytest.raises(ScenarioValidationError) as err:
        parse_scenario(record)
    assert "strictly increasing" in str(err.value)

    record = _record()
    record["tracks"][0]["points"] = [_point(0.0, 0.0, 0.0, heading=3 * math.pi / 2),
                                     _point(0.1, 0.5, 0.0, heading=-math.pi)]
    scenario = parse_scenario(record)
    assert scenario.tracks[0].points[0].heading_rad == pytest.approx(-math.pi / 2, abs=1e-12)
    assert scenario.tracks[0].points[1].heading_rad == pytest.approx(math.pi, abs=0.0)


def test_non_object_record_is_a_parse_error():
    with pytest.raises(ScenarioParseError):
        parse_scenario([1, 2, 3])


def test_read_scenarios_tags_line_numbers(tmp_path):
    path = tmp_path / "scenes.jsonl"
    good = json.dumps(_record())
    path.write_text(good + "\n{not json\n")
    with pytest.raises(ScenarioParseError) as err:
        list(read_scenarios(path))
    assert ":2:" in str(err.value)

    bad = _record(sample_period_s=-1)
    path.write_text(good + "\n" + json.dumps(bad) + "\n")
    with pytest.raises(ScenarioValidationError) as err2:
        list(read_scenarios(path))
    assert ":2:" in str(err2.value)


def test_write_and_read_files_round_trip(tmp_path):
    scenarios = [parse_scenario(_record()),
                 parse_scenario(_record(scenario_id="s2"))]
    path = tmp_path / "out.jsonl"
    write_scenarios(path, scenarios)
    assert list(read_scenarios(path)) == scenarios


def test_straight_path_arclength_is_exact():
    track = straight_track("a", speed_mps=10.0, duration_s=0.9, period_s=0.1)
    path = extract_path(track, eps_dedupe_m=0.05)
    assert path.length == pytest.approx(9.0, abs=1e-12)
    assert path.vertices.shape == (10, 2)


def test_quarter_circle_arclength_within_tenth_percent():
    radius = 10.0
    angles = np.deg2rad(np.arange(0, 91))
    vertices = np.stack([radius * np.cos(angles), radius * np.sin(angles)], axis=1)
    path = Path(vertices)
    true_length = 0.5 * math.pi * radius
    assert abs(path.length - true_length) / true_length < 1e-3


def test_path_dedupes_jitter_vertices():
    points = [_point(0.0, 0.0, 0.0), _point(0.1, 0.01, 0.0),
              _point(0.2, 0.02, 0.0), _point(0.3, 1.0, 0.0)]
    record = _record()
    record["tracks"][0]["points"] = points
    track = parse_scenario(record).tracks[0]
    path = extract_path(track, eps_dedupe_m=0.05)
    assert path.vertices.shape == (2, 2)
    assert path.length == pytest.approx(1.0)


def test_position_heading_and_projection_on_straight_path():
    path = Path(np.array([[0.0, 0.0], [9.0, 0.0]]))
    assert np.allclose(path.position_at(2.5), [2.5, 0.0])
    # beyond the end extrapolates along the last segment
    assert np.allclose(path.position_at(12.0), [12.0, 0.0])
    # negative arclength clamps to the start
    assert np.allclose(path.position_at(-1.0), [0.0, 0.0])
    assert path.heading_at(3.0) == pytest.approx(0.0)
    assert path.project(3.2, 1.0) == pytest.approx(3.2)
    assert path.project(15.0, 2.0) == pytest.approx(9.0)

    batch = path.position_at(np.array([0.0, 4.5, 9.0]))
    assert batch.shape == (3, 2)
    assert np.allclose(batch[:, 0], [0.0, 4.5, 9.0])


def test_corner_heading_uses_next_segment():
    path = Path(np.array([[0.0, 0.0], [5.0, 0.0], [5.0, 5.0]]))
    assert path.heading_at(2.0) == pytest.approx(0.0)
    assert path.heading_at(5.0) == pytest.approx(math.pi / 2)
    assert path.heading_at(100.0) == pytest.approx(math.pi / 2)
    assert np.allclose(path.position_at(7.0), [5.0, 2.0])
    assert path.project(4.0, 3.0) == pytest.approx(8.0)  # nearer the vertical leg


def test_degenerate_path_extends_along_recorded_heading():
    record = _record()
    record["tracks"][0]["points"] = [_point(0.0, 2.0, 3.0, heading=math.pi / 2, speed=0.0),
                                     _point(0.1, 2.0, 3.0, heading=math.pi / 2, speed=0.0)]
    track = parse_scenario(record).tracks[0]
    path = extract_path(track, eps_dedupe_m=0.05)
    assert path.length == 0.0
    assert np.allclose(path.position_at(0.0), [2.0, 3.0])
    assert np.allclose(path.position_at(2.0), [2.0, 5.0])


def test_initial_state_anchor_rules():
    track = straight_track("a", speed_mps=4.0)
    state = initial_state(track)
    assert state is not None
    assert state.t_s == 0.0 and state.late_start is False
    assert state.speed_mps == 4.0

    late = straight_track("b", t0_s=1.0)
    state = initial_state(late)
    assert state.t_s == pytest.approx(1.0) and state.late_start is True

    with_history = straight_track("c", t0_s=-1.0)
    state = initial_state(with_history)
    assert state.t_s == pytest.approx(0.0) and state.late_start is False

    past_only = straight_track("d", t0_s=-2.0, duration_s=1.0)
    state = initial_state(past_only)
    assert state.t_s == pytest.approx(-1.0) and state.late_start is True

    none_valid = straight_track("e", valid_mask=[False] * 91)
    assert initial_state(none_valid) is None


def test_first_valid_point_after_gap_is_anchor():
    mask = [False, False] + [True] * 89
    track = straight_track("a", valid_mask=mask, period_s=0.1)
    state = initial_state(track)
    assert state.t_s == pytest.approx(0.2)
    assert state.late_start is True


def test_normalize_heading_range():
    for h in (-7.0, -math.pi, 0.0, 1.0, math.pi, 9.5, 100.0):
        w = normalize_heading(h)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.cos(w), math.cos(h), abs_tol=1e-12)
        assert math.isclose(math.sin(w), math.sin(h), abs_tol=1e-12)
