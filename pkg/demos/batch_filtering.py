"""
Filtering a directory of scenario files
=======================================

Writes a small batch of synthetic scenario files, runs the batch
pipeline over them, and pokes at the outputs: ranked risk edges,
retrieved situations, per-agent verdicts, and the agreement of the
risk filter with two reference baselines.
"""

import tempfile
from pathlib import Path

from risk_sieve import random_scenario, read_jsonl, run_pipeline, write_scenarios

workdir = Path(tempfile.mkdtemp(prefix="risk_sieve_demo_"))
input_dir = workdir / "scenarios"
input_dir.mkdir()

# five files, a few reproducible random scenes each
for shard in range(5):
    scenes = [random_scenario(seed) for seed in range(shard * 3, shard * 3 + 3)]
    write_scenarios(input_dir / f"shard{shard}.jsonl", scenes)

result = run_pipeline(input_dir, workdir / "out", workers=2)
print(f"{result.n_scenarios} scenarios from {result.n_files} files "
      f"in {result.elapsed_s:.2f}s")
print(f"outputs in {result.output_dir}")

# the edge list is the raw material: every eligible directed pair
edges = read_jsonl(Path(result.output_dir) / "risk_edges.jsonl")
edges.sort(key=lambda row: -row["risk"])
print()
print("top five directed risks")
for row in edges[:5]:
    print(f"  {row['scenario_id']}  {row['ego_id']} -> {row['other_id']}  "
          f"{row['risk']:.3e}")

situations = read_jsonl(Path(result.output_dir) / "situations.jsonl")
n_first = sum(1 for row in situations if row["order"] == 1)
n_second = sum(1 for row in situations if row["order"] == 2)
print()
print(f"retrieved {n_first} first order and {n_second} second order situations")

# per-agent verdicts are what a downstream training set would filter on
agents = read_jsonl(Path(result.output_dir) / "agents.jsonl")
kept = sum(1 for row in agents if row["risk_valuable"])
print(f"{kept} of {len(agents)} agents marked valuable")

# confusion against the straight-line displacement-error baseline
print()
print((Path(result.output_dir) / "confusion.csv").read_text().strip())
