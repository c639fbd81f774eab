"""Command-line interface: batch filtering plus output recombination tools."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath

from .config import ConfigError, FilterConfig, load_config
from .pipeline import (
    AGENTS_FILE,
    confusion_from_rows,
    read_jsonl,
    run_pipeline,
)
from .reports import type_histograms, write_confusion_csv, write_histograms_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risk-sieve",
        description="Filter multi-agent driving recordings by collision risk.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="process a directory of scenario files")
    run_p.add_argument("--input", required=True, help="directory of *.jsonl scenario files")
    run_p.add_argument("--config", default=None, help="key=value parameter file")
    run_p.add_argument("--output", required=True, help="directory for result files")
    run_p.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    compare_p = sub.add_parser("compare", help="confusion matrices against baselines")
    compare_p.add_argument("--risk", required=True, help="agents.jsonl from a run")
    compare_p.add_argument("--baseline", required=True, help="baselines.jsonl from a run")
    compare_p.add_argument("--out", required=True, help="confusion csv to write")

    stats_p = sub.add_parser("stats", help="situation type histograms")
    stats_p.add_argument("--situations", required=True, help="situations.jsonl from a run")
    stats_p.add_argument("--agents", default=None,
                         help="agents.jsonl (default: next to the situations file)")
    stats_p.add_argument("--out", required=True, help="histogram csv to write")
    return parser


def _cmd_run(args) -> int:
    try:
        config = load_config(args.config) if args.config else FilterConfig()
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        result = run_pipeline(args.input, args.output, config, workers=args.workers)
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(f"processed {result.n_scenarios} scenarios from {result.n_files} files "
          f"in {result.elapsed_s:.2f}s")
    print(f"agents: {result.n_agents}  first-order: {result.n_first_order}  "
          f"second-order: {result.n_second_order}")
    if result.skipped:
        print(f"skipped {len(result.skipped)} records:", file=sys.stderr)
        for item in result.skipped[:20]:
            print(f"  {item['file']}:{item['line']}: {item['reason']}", file=sys.stderr)
        if len(result.skipped) > 20:
            print(f"  ... and {len(result.skipped) - 20} more", file=sys.stderr)
        return 1
    return 0


def _cmd_compare(args) -> int:
    try:
        agent_rows = read_jsonl(args.risk)
        baseline_rows = read_jsonl(args.baseline)
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    write_confusion_csv(args.out, confusion_from_rows(agent_rows, baseline_rows))
    print(f"wrote {args.out}")
    return 0


def _cmd_stats(args) -> int:
    agents_path = args.agents or str(FsPath(args.situations).parent / AGENTS_FILE)
    try:
        situation_rows = read_jsonl(args.situations)
        agent_rows = read_jsonl(agents_path)
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    agent_types = {(a["scenario_id"], a["agent_id"]): a["type"] for a in agent_rows}
    try:
        histograms = type_histograms(situation_rows, agent_types)
    except KeyError as exc:
        print(f"situation references unknown agent: {exc}", file=sys.stderr)
        return 2
    write_histograms_csv(args.out, histograms)
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "compare":
        return _cmd_compare(args)
    return _cmd_stats(args)


if __name__ == "__main__":
    sys.exit(main())
