"""Aggregates over run outputs: confusion matrices and situation type histograms."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Tuple


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 agreement between the risk filter and one baseline."""

    true_positive: int
    false_positive: int
    false_negative: int
    true_negative: int

    @property
    def total(self) -> int:
        return (self.true_positive + self.false_positive
                + self.false_negative + self.true_negative)

    @property
    def agreement(self) -> Optional[float]:
        if self.total == 0:
            return None
        return (self.true_positive + self.true_negative) / self.total


def confusion_matrix(flag_pairs: Iterable[Tuple[bool, Optional[bool]]]) -> ConfusionMatrix:
    """Count (risk_flag, baseline_flag) pairs; rows without a baseline verdict are skipped."""
    tp = fp = fn = tn = 0
    for risk_flag, baseline_flag in flag_pairs:
        if baseline_flag is None:
            continue
        if risk_flag and baseline_flag:
            tp += 1
        elif risk_flag and not baseline_flag:
            fp += 1
        elif baseline_flag:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def first_order_type_key(ego_type: str, other_type: str) -> str:
    """Unordered pair of types, e.g. 'car-pedestrian'."""
    lo, hi = sorted((ego_type, other_type))
    return f"{lo}-{hi}"


def second_order_type_key(ego_type: str, first_type: str, second_type: str) -> str:
    """Chain of types with the outer two normalized, the middle one kept."""
    lo, hi = sorted((ego_type, second_type))
    return f"{lo}-{first_type}-{hi}"


def type_histograms(
    situation_rows: Iterable[Mapping],
    agent_types: Mapping[Tuple[str, str], str],
) -> Dict[int, Dict[str, int]]:
    """Situation counts bucketed by participant types, per order.

    agent_types maps (scenario_id, agent_id) to a type name. Situations whose
    participants are missing from the map raise KeyError: a histogram over
    partially resolved types would be silently wrong.
    """
    out: Dict[int, Dict[str, int]] = {1: {}, 2: {}}
    for row in situation_rows:
        scenario_id = row["scenario_id"]
        ego_type = agent_types[(scenario_id, row["ego_id"])]
        first_type = agent_types[(scenario_id, row["first_id"])]
        if row["order"] == 1:
            key = first_order_type_key(ego_type, first_type)
            bucket = out[1]
        else:
            second_type = agent_types[(scenario_id, row["second_id"])]
            key = second_order_type_key(ego_type, first_type, second_type)
            bucket = out[2]
        bucket[key] = bucket.get(key, 0) + 1
    return out


def write_confusion_csv(path, matrices: Mapping[str, ConfusionMatrix]) -> None:
    """One row per baseline: counts plus the agreement rate."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["baseline", "true_positive", "false_positive",
                         "false_negative", "true_negative", "agreement"])
        for name in sorted(matrices):
            m = matrices[name]
            agreement = "" if m.agreement is None else f"{m.agreement:.6f}"
            writer.writerow([name, m.true_positive, m.false_positive,
                             m.false_negative, m.true_negative, agreement])


def write_histograms_csv(path, histograms: Mapping[int, Mapping[str, int]]) -> None:
    """Rows of (order, type chain, count), sorted for reproducible output."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["order", "types", "count"])
        for order in sorted(histograms):
            buckets = histograms[order]
            for key in sorted(buckets):
                writer.writerow([order, key, buckets[key]])
