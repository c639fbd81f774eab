"""Batch run over a directory of scenario files, with deterministic outputs."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path as FsPath
from typing import Dict, List, Optional

from .baselines import assess_track
from .config import FilterConfig, config_hash
from .graph import (
    build_graph,
    retrieve_first_order,
    retrieve_second_order,
    valuable_users,
)
from .reports import (
    confusion_matrix,
    type_histograms,
    write_confusion_csv,
    write_histograms_csv,
)
from .scenario import (
    Scenario,
    ScenarioParseError,
    ScenarioValidationError,
    parse_scenario,
)

EDGES_FILE = "risk_edges.jsonl"
SITUATIONS_FILE = "situations.jsonl"
AGENTS_FILE = "agents.jsonl"
BASELINES_FILE = "baselines.jsonl"
CONFUSION_FILE = "confusion.csv"
HISTOGRAMS_FILE = "histograms.csv"
MANIFEST_FILE = "manifest.json"


@dataclass
class PipelineResult:
    n_files: int
    n_scenarios: int
    n_agents: int
    n_first_order: int
    n_second_order: int
    skipped: List[dict]
    elapsed_s: float
    output_dir: str


def _brief(exc: Exception, limit: int = 200) -> str:
    text = str(exc)
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _situation_sort_key(row: dict):
    return (row["scenario_id"], row["order"], row["ego_id"],
            row["first_id"], row["second_id"] or "")


def _process_scenario(scenario: Scenario, config: FilterConfig, sink: dict) -> None:
    graph = build_graph(scenario, config)
    firsts = retrieve_first_order(graph, config.r_valuable)
    seconds = retrieve_second_order(graph, config.r_valuable,
                                    config.second_order_pairing,
                                    config.dedupe_second_order)
    valuable = set(valuable_users(graph, config.r_valuable))
    sid = scenario.scenario_id
    for edge in graph.edges():
        sink["edges"].append({
            "scenario_id": sid, "ego_id": edge.ego_id,
            "other_id": edge.other_id, "risk": edge.risk,
        })
    for s in firsts:
        sink["situations"].append({
            "scenario_id": sid, "order": 1, "ego_id": s.ego_id,
            "first_id": s.other_id, "second_id": None,
            "risk_first": s.risk, "risk_second": None,
        })
    for s in seconds:
        sink["situations"].append({
            "scenario_id": sid, "order": 2, "ego_id": s.ego_id,
            "first_id": s.first_id, "second_id": s.second_id,
            "risk_first": s.risk_first, "risk_second": s.risk_second,
        })
    for track in scenario.tracks:
        status = graph.statuses[track.id]
        sink["agents"].append({
            "scenario_id": sid, "agent_id": track.id, "type": track.type.value,
            "risk_valuable": track.id in valuable,
            "predicted": status.predicted, "late_start": status.late_start,
            "reason": status.reason, "dims_defaulted": track.dims_defaulted,
            "ttp": track.ttp,
        })
        verdict = assess_track(track, config, scenario.sample_period_s)
        sink["baselines"].append({
            "scenario_id": sid, "agent_id": track.id, "fde_m": verdict.fde_m,
            "kalman_valuable": verdict.kalman_valuable,
            "ttp_valuable": verdict.ttp_valuable, "note": verdict.note,
        })


def _rows_for_file(path_str: str, config: FilterConfig) -> dict:
    sink = {"edges": [], "situations": [], "agents": [], "baselines": [],
            "skipped": [], "n_scenarios": 0}
    name = FsPath(path_str).name
    with open(path_str, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                scenario = parse_scenario(record, config)
            except (json.JSONDecodeError, ScenarioParseError,
                    ScenarioValidationError) as exc:
                sink["skipped"].append({"file": name, "line": lineno,
                                        "reason": _brief(exc)})
                continue
            _process_scenario(scenario, config, sink)
            sink["n_scenarios"] += 1
    return sink


def _write_jsonl(path, rows: List[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, separators=(",", ":"), allow_nan=False))
            fh.write("\n")


def read_jsonl(path) -> List[dict]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out


def confusion_from_rows(agent_rows: List[dict], baseline_rows: List[dict]) -> dict:
    """Kalman and label confusion matrices from agents/baselines rows."""
    verdicts = {(b["scenario_id"], b["agent_id"]): b for b in baseline_rows}
    kalman_pairs = []
    ttp_pairs = []
    for row in agent_rows:
        verdict = verdicts.get((row["scenario_id"], row["agent_id"]))
        if verdict is None:
            continue
        kalman_pairs.append((row["risk_valuable"], verdict["kalman_valuable"]))
        ttp_pairs.append((row["risk_valuable"], verdict["ttp_valuable"]))
    return {"kalman": confusion_matrix(kalman_pairs),
            "ttp": confusion_matrix(ttp_pairs)}


def run_pipeline(input_dir, output_dir, config: Optional[FilterConfig] = None,
                 workers: int = 1) -> PipelineResult:
    """Filter every *.jsonl scenario file under input_dir into output_dir.

    Data outputs (jsonl/csv) are byte-identical for a given input and config
    regardless of worker count: per-file results are flattened in sorted file
    order and sorted on stable keys before writing. manifest.json carries run
    metadata including timing and is exempt from that guarantee.
    """
    start = time.monotonic()
    if config is None:
        config = FilterConfig()
    in_dir = FsPath(input_dir)
    if not in_dir.is_dir():
        raise FileNotFoundError(f"input directory not found: {input_dir}")
    out_dir = FsPath(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = sorted(str(p) for p in in_dir.glob("*.jsonl"))

    per_file: Dict[str, dict] = {}
    if workers <= 1:
        for path in files:
            per_file[path] = _rows_for_file(path, config)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_rows_for_file, path, config): path
                       for path in files}
            for future in as_completed(futures):
                per_file[futures[future]] = future.result()

    edges: List[dict] = []
    situations: List[dict] = []
    agents: List[dict] = []
    baselines: List[dict] = []
    skipped: List[dict] = []
    n_scenarios = 0
    for path in files:
        sink = per_file[path]
        edges.extend(sink["edges"])
        situations.extend(sink["situations"])
        agents.extend(sink["agents"])
        baselines.extend(sink["baselines"])
        skipped.extend(sink["skipped"])
        n_scenarios += sink["n_scenarios"]

    edges.sort(key=lambda r: (r["scenario_id"], r["ego_id"], r["other_id"]))
    situations.sort(key=_situation_sort_key)
    agents.sort(key=lambda r: (r["scenario_id"], r["agent_id"]))
    baselines.sort(key=lambda r: (r["scenario_id"], r["agent_id"]))
    skipped.sort(key=lambda r: (r["file"], r["line"]))

    _write_jsonl(out_dir / EDGES_FILE, edges)
    _write_jsonl(out_dir / SITUATIONS_FILE, situations)
    _write_jsonl(out_dir / AGENTS_FILE, agents)
    _write_jsonl(out_dir / BASELINES_FILE, baselines)

    agent_types = {(a["scenario_id"], a["agent_id"]): a["type"] for a in agents}
    write_histograms_csv(out_dir / HISTOGRAMS_FILE,
                         type_histograms(situations, agent_types))
    write_confusion_csv(out_dir / CONFUSION_FILE,
                        confusion_from_rows(agents, baselines))

    elapsed = time.monotonic() - start
    n_first = sum(1 for s in situations if s["order"] == 1)
    n_second = len(situations) - n_first
    manifest = {
        "config_hash": config_hash(config),
        "inputs": [FsPath(p).name for p in files],
        "n_files": len(files),
        "n_scenarios": n_scenarios,
        "n_agents": len(agents),
        "n_first_order": n_first,
        "n_second_order": n_second,
        "n_skipped": len(skipped),
        "skipped": skipped,
        "workers": workers,
        "elapsed_s": elapsed,
    }
    with open(out_dir / MANIFEST_FILE, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")

    return PipelineResult(
        n_files=len(files), n_scenarios=n_scenarios, n_agents=len(agents),
        n_first_order=n_first, n_second_order=n_second, skipped=skipped,
        elapsed_s=elapsed, output_dir=str(out_dir),
    )
