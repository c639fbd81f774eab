"""Confusion matrices and situation type histograms."""

import pytest

from risk_sieve.reports import (
    ConfusionMatrix,
    confusion_matrix,
    first_order_type_key,
    second_order_type_key,
    type_histograms,
    write_confusion_csv,
    write_histograms_csv,
)


def test_confusion_counts_and_skips_unscored():
    pairs = [
        (True, True), (True, False), (False, True), (False, False),
        (True, None), (False, None), (True, True),
    ]
    matrix = confusion_matrix(pairs)
    assert matrix == ConfusionMatrix(true_positive=2, false_positive=1,
                                     false_negative=1, true_negative=1)
    assert matrix.total == 5
    assert matrix.agreement == pytest.approx(3 / 5)
    assert confusion_matrix([]).agreement is None


def test_type_keys_are_normalized():
    assert first_order_type_key("pedestrian", "car") == "car-pedestrian"
    assert first_order_type_key("car", "pedestrian") == "car-pedestrian"
    assert second_order_type_key("pedestrian", "car", "bicycle") == "bicycle-car-pedestrian"
    assert second_order_type_key("bicycle", "car", "pedestrian") == "bicycle-car-pedestrian"
    # the middle of the chain is meaningful and stays put
    assert second_order_type_key("car", "pedestrian", "car") == "car-pedestrian-car"


def test_type_histograms_counts():
    agent_types = {("s", "a"): "car", ("s", "b"): "car", ("s", "c"): "pedestrian"}
    rows = [
        {"scenario_id": "s", "order": 1, "ego_id": "a", "first_id": "b", "second_id": None},
        {"scenario_id": "s", "order": 1, "ego_id": "b", "first_id": "a", "second_id": None},
        {"scenario_id": "s", "order": 2, "ego_id": "a", "first_id": "b", "second_id": "c"},
    ]
    histograms = type_histograms(rows, agent_types)
    assert histograms[1] == {"car-car": 2}
    assert histograms[2] == {"car-car-pedestrian": 1}

    with pytest.raises(KeyError):
        type_histograms([{"scenario_id": "s", "order": 1, "ego_id": "a",
                          "first_id": "zz", "second_id": None}], agent_types)


def test_csv_writers(tmp_path):
    confusion_path = tmp_path / "confusion.csv"
    write_confusion_csv(confusion_path, {
        "kalman": ConfusionMatrix(2, 1, 1, 1),
        "ttp": ConfusionMatrix(0, 0, 0, 0),
    })
    lines = confusion_path.read_text().strip().splitlines()
    assert lines[0] == "baseline,true_positive,false_positive,false_negative,true_negative,agreement"
    assert lines[1] == "kalman,2,1,1,1,0.600000"
    assert lines[2] == "ttp,0,0,0,0,"

    histogram_path = tmp_path / "hist.csv"
    write_histograms_csv(histogram_path, {1: {"car-car": 3, "car-pedestrian": 1}, 2: {}})
    lines = histogram_path.read_text().strip().splitlines()
    assert lines[0] == "order,types,count"
    assert lines[1] == "1,car-car,3"
    assert lines[2] == "1,car-pedestrian,1"
    assert len(lines) == 3
