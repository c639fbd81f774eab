import json
import math
import statistics

import pytest

import proto_builder as pb
from waymo_converter.cli import main
from waymo_converter.convert import (
    ConversionReport,
    FileReport,
    convert,
    convert_file,
    convert_scenario,
    output_name,
)
from waymo_converter.schema import validate_record
from waymo_converter.waymo import decode_scenario

# exactly representable sample period so time arithmetic is bit-exact in tests
PERIOD = 0.125


def timestamps(n, period=PERIOD, start=0.0):
    return [start + period * i for i in range(n)]


def straight_states(n, x0=0.0, y0=0.0, heading=0.0, speed=5.0, period=PERIOD,
                    length=4.5, width=1.9, valid_mask=None):
    states = []
    vx = speed * math.cos(heading)
    vy = speed * math.sin(heading)
    for j in range(n):
        valid = True if valid_mask is None else bool(valid_mask[j])
        states.append(pb.build_state(
            x=x0 + vx * period * j, y=y0 + vy * period * j,
            length=length, width=width, heading=heading,
            vx=vx, vy=vy, valid=valid))
    return states


def scenario_payload(scenario_id="scene", n=21, tracks=(), cti=10,
                     predict=(), **kwargs):
    return pb.build_scenario(scenario_id, timestamps(n), list(tracks),
                             current_time_index=cti, predict_indices=predict,
                             **kwargs)


def one_track_payload(**track_kwargs):
    track = pb.build_track(1, 1, straight_states(21, **track_kwargs))
    return scenario_payload(tracks=[track])


def test_basic_conversion_values():
    tracks = [
        pb.build_track(7, 1, straight_states(21, x0=10.0, speed=5.0)),
        pb.build_track(8, 2, straight_states(21, y0=30.0, heading=math.pi / 2,
                                             speed=1.0, length=0.9, width=0.7)),
    ]
    decoded = decode_scenario(scenario_payload(tracks=tracks, predict=[0]))
    record, agent_skips, reason = convert_scenario(decoded)
    assert reason is None and agent_skips == []
    assert record["scenario_id"] == "scene"
    assert record["sample_period_s"] == PERIOD
    assert [t["id"] for t in record["tracks"]] == ["7", "8"]
    assert [t["type"] for t in record["tracks"]] == ["car", "pedestrian"]
    assert [t["ttp"] for t in record["tracks"]] == [1, 0]

    car = record["tracks"][0]
    # t is re-based on the current step: ten history samples then the future
    assert car["points"][10]["t_s"] == 0.0
    assert car["points"][0]["t_s"] == -10 * PERIOD
    assert car["points"][20]["t_s"] == 10 * PERIOD
    assert car["points"][0]["x_m"] == 10.0
    assert all(p["valid"] == 1 for p in car["points"])
    assert validate_record(record) == []


def test_speed_is_velocity_magnitude():
    track = pb.build_track(1, 1, [
        pb.build_state(vx=3.0, vy=-4.0, valid=True),
        pb.build_state(vx=0.0, vy=0.0, valid=True),
    ])
    decoded = decode_scenario(pb.build_scenario("s", timestamps(2), [track]))
    record, _, _ = convert_scenario(decoded)
    speeds = [p["speed_mps"] for p in record["tracks"][0]["points"]]
    assert speeds == [5.0, 0.0]


def test_dims_are_medians_over_valid_states():
    states = [
        pb.build_state(length=4.0, width=1.8, valid=True),
        pb.build_state(length=4.4, width=2.0, valid=True),
        pb.build_state(length=4.2, width=1.9, valid=True),
        pb.build_state(length=99.0, width=99.0, valid=False),
    ]
    decoded = decode_scenario(pb.build_scenario("s", timestamps(4),
                                                [pb.build_track(1, 1, states)]))
    record, _, _ = convert_scenario(decoded)
    track = record["tracks"][0]
    assert track["length_m"] == statistics.median(pb.f32(v) for v in (4.0, 4.4, 4.2))
    assert track["width_m"] == statistics.median(pb.f32(v) for v in (1.8, 2.0, 1.9))


def test_nonpositive_dims_are_omitted():
    record, _, _ = convert_scenario(decode_scenario(
        one_track_payload(length=0.0, width=0.0)))
    track = record["tracks"][0]
    assert "length_m" not in track and "width_m" not in track
    # the schema check still passes; the consumer applies its own defaults
    assert validate_record(record) == []


def test_unsupported_types_skipped_and_ttp_follows_original_indices():
    tracks = [
        pb.build_track(1, 1, straight_states(21)),
        pb.build_track(2, 4, straight_states(21)),  # "other": not convertible
        pb.build_track(3, 3, straight_states(21)),
        pb.build_track(4, 0, straight_states(21)),  # unset type
    ]
    decoded = decode_scenario(scenario_payload(tracks=tracks, predict=[2]))
    record, agent_skips, _ = convert_scenario(decoded)
    assert [t["id"] for t in record["tracks"]] == ["1", "3"]
    assert [t["type"] for t in record["tracks"]] == ["car", "bicycle"]
    # index 2 of the original track list is the bicycle
    assert [t["ttp"] for t in record["tracks"]] == [0, 1]
    assert agent_skips == [(1, "unsupported object type 4"),
                           (3, "unsupported object type 0")]


def test_invalid_steps_carried_as_valid_zero():
    mask = [True] * 21
    mask[3] = mask[4] = False
    record, _, _ = convert_scenario(decode_scenario(
        one_track_payload(valid_mask=mask)))
    points = record["tracks"][0]["points"]
    assert len(points) == 21
    assert [p["valid"] for p in points[2:6]] == [1, 0, 0, 1]


def test_agent_with_no_valid_samples_skipped():
    record, agent_skips, _ = convert_scenario(decode_scenario(
        one_track_payload(valid_mask=[False] * 21)))
    assert record["tracks"] == []
    assert agent_skips == [(0, "no valid samples")]


def test_state_count_mismatch_skipped():
    short = pb.build_track(1, 1, straight_states(15))
    decoded = decode_scenario(scenario_payload(tracks=[short]))
    record, agent_skips, _ = convert_scenario(decoded)
    assert record["tracks"] == []
    assert agent_skips == [(0, "15 states for 21 timestamps")]


def test_duplicate_track_id_skipped():
    tracks = [pb.build_track(7, 1, straight_states(21)),
              pb.build_track(7, 2, straight_states(21))]
    record, agent_skips, _ = convert_scenario(
        decode_scenario(scenario_payload(tracks=tracks)))
    assert [t["id"] for t in record["tracks"]] == ["7"]
    assert record["tracks"][0]["type"] == "car"
    assert agent_skips == [(1, "duplicate id 7")]


def test_anchor_start_rebases_to_first_step():
    decoded = decode_scenario(one_track_payload())
    current, _, _ = convert_scenario(decoded, anchor="current")
    start, _, _ = convert_scenario(decoded, anchor="start")
    assert current["tracks"][0]["points"][10]["t_s"] == 0.0
    assert start["tracks"][0]["points"][0]["t_s"] == 0.0
    assert start["sample_period_s"] == current["sample_period_s"]
    with pytest.raises(ValueError, match="anchor"):
        convert_scenario(decoded, anchor="middle")


@pytest.mark.parametrize("payload,reason", [
    (pb.build_scenario("", timestamps(21), []), "missing scenario id"),
    (pb.build_scenario("s", [0.0], []), "fewer than two timestamps"),
    (pb.build_scenario("s", [0.0, 0.2, 0.1], []),
     "timestamps not strictly increasing"),
    (pb.build_scenario("s", timestamps(5), [], current_time_index=9),
     "current time index 9 out of range"),
])
def test_scenario_level_skips(payload, reason):
    record, _, got = convert_scenario(decode_scenario(payload))
    assert record is None
    assert got == reason


def test_empty_shard_reports_zero_scenarios(tmp_path):
    shard = tmp_path / "empty.tfrecord-00000-of-00001"
    pb.write_shard(shard, [])
    report = convert([shard], tmp_path / "out")
    assert report.scenarios_emitted == 0
    assert report.files[0].encountered == 0
    assert report.files[0].error is None
    assert (tmp_path / "out" / output_name(shard)).read_bytes() == b""


def test_corrupt_frame_skips_remainder(tmp_path):
    shard = tmp_path / "corrupt.tfrecord"
    payloads = [one_track_payload(), one_track_payload(), one_track_payload()]
    pb.write_shard(shard, payloads)
    data = bytearray(shard.read_bytes())
    second_start = 16 + len(payloads[0])
    data[second_start + 12 + 3] ^= 0xFF  # a byte inside the second payload
    shard.write_bytes(bytes(data))

    file_report = convert_file(shard, tmp_path)
    assert file_report.emitted == 1
    assert file_report.encountered == 2
    assert len(file_report.record_skips) == 1
    index, reason = file_report.record_skips[0]
    assert index == 1
    assert "remainder of file skipped" in reason


def test_undecodable_record_skipped(tmp_path):
    shard = tmp_path / "garbage.tfrecord"
    pb.write_shard(shard, [b"\x80\x80", one_track_payload()])
    file_report = convert_file(shard, tmp_path)
    assert file_report.emitted == 1
    assert file_report.encountered == 2
    assert file_report.record_skips[0][0] == 0
    assert "undecodable record" in file_report.record_skips[0][1]


def test_unreadable_shard_reported_not_raised(tmp_path):
    report = convert([tmp_path], tmp_path / "out")  # a directory, not a file
    assert report.files[0].error is not None
    assert "unreadable shard" in report.files[0].error
    assert report.files[0].encountered == 0
    assert not report.clean


def test_conversion_is_idempotent(tmp_path):
    shard = tmp_path / "idem.tfrecord"
    pb.write_shard(shard, [one_track_payload(), scenario_payload(
        scenario_id="second", tracks=[pb.build_track(2, 3, straight_states(21))])])
    first_dir = tmp_path / "first"
    second_dir = tmp_path / "second"
    convert([shard], first_dir)
    convert([shard], second_dir)
    convert([shard], second_dir)  # overwrite in place as well
    name = output_name(shard)
    first = (first_dir / name).read_bytes()
    assert first == (second_dir / name).read_bytes()
    assert first.endswith(b"\n")


def test_report_invariant_enforced():
    with pytest.raises(ValueError, match="must equal encountered"):
        FileReport(path="x", output_path=None, encountered=3, emitted=1)


def test_report_to_dict_is_json_ready(tmp_path):
    shard = tmp_path / "s.tfrecord"
    pb.write_shard(shard, [one_track_payload()])
    report = convert([shard], tmp_path / "out")
    payload = json.loads(json.dumps(report.to_dict()))
    assert payload["scenarios_emitted"] == 1
    assert payload["agents_per_type"] == {"car": 1}
    assert payload["files"][0]["emitted"] == 1


def test_cli_clean_run(tmp_path, capsys):
    shard = tmp_path / "clean.tfrecord"
    pb.write_shard(shard, [one_track_payload()])
    out_dir = tmp_path / "out"
    report_path = tmp_path / "report.json"
    code = main(["--input", str(shard), "--output", str(out_dir),
                 "--report", str(report_path)])
    captured = capsys.readouterr()
    assert code == 0
    assert "1 scenarios" in captured.out
    assert captured.err == ""
    assert (out_dir / output_name(shard)).exists()
    assert json.loads(report_path.read_text())["records_skipped"] == 0


def test_cli_reports_skips_with_exit_one(tmp_path, capsys):
    track = pb.build_track(1, 4, straight_states(21))  # unsupported type
    shard = tmp_path / "skips.tfrecord"
    pb.write_shard(shard, [scenario_payload(tracks=[track])])
    code = main(["--input", str(shard), "--output", str(tmp_path / "out")])
    captured = capsys.readouterr()
    assert code == 1
    assert "unsupported object type" in captured.err


def test_cli_missing_input_exits_two(tmp_path, capsys):
    code = main(["--input", str(tmp_path / "absent.tfrecord"),
                 "--output", str(tmp_path / "out")])
    assert code == 2
    assert "not found" in capsys.readouterr().err


def test_cli_anchor_start(tmp_path):
    shard = tmp_path / "anchored.tfrecord"
    pb.write_shard(shard, [one_track_payload()])
    out_dir = tmp_path / "out"
    assert main(["--input", str(shard), "--output", str(out_dir),
                 "--anchor", "start"]) == 0
    line = (out_dir / output_name(shard)).read_text().splitlines()[0]
    record = json.loads(line)
    assert record["tracks"][0]["points"][0]["t_s"] == 0.0


def test_schema_check_flags_bad_records():
    good, _, _ = convert_scenario(decode_scenario(one_track_payload()))
    assert validate_record(good) == []
    assert validate_record([]) == ["record must be an object"]
    bad = json.loads(json.dumps(good))
    bad["sample_period_s"] = 0.0
    bad["tracks"][0]["type"] = "truck"
    bad["tracks"][0]["points"][0]["t_s"] = bad["tracks"][0]["points"][1]["t_s"]
    problems = validate_record(bad)
    assert any("sample_period_s" in p for p in problems)
    assert any(".type" in p for p in problems)
    assert any("strictly increasing" in p for p in problems)
