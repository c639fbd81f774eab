"""Command line entry point: convert_waymo."""

import argparse
import json
import sys
from pathlib import Path

from .convert import ANCHOR_MODES, convert

_MAX_LISTED = 20


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="convert_waymo",
        description="Convert motion dataset scenario shards to JSON-lines "
                    "interchange files, one output file per shard.")
    parser.add_argument("--input", nargs="+", required=True, metavar="SHARD",
                        help="shard file(s) to convert")
    parser.add_argument("--output", required=True, metavar="DIR",
                        help="directory for the converted .jsonl files")
    parser.add_argument("--anchor", choices=ANCHOR_MODES, default="current",
                        help="which recorded step becomes t = 0: the dataset's "
                             "current step (default) or the first step")
    parser.add_argument("--report", metavar="FILE", default=None,
                        help="also write the full conversion report as JSON")
    args = parser.parse_args(argv)

    missing = [path for path in args.input if not Path(path).is_file()]
    if missing:
        for path in missing:
            print(f"input shard not found: {path}", file=sys.stderr)
        return 2
    try:
        report = convert(args.input, args.output, anchor=args.anchor)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 2

    for file_report in report.files:
        if file_report.error is not None:
            print(f"{file_report.path}: {file_report.error}")
        else:
            print(f"{file_report.path}: {file_report.emitted} scenarios "
                  f"-> {file_report.output_path}")
    types = ", ".join(f"{name}={count}"
                      for name, count in report.agents_per_type.items())
    print(f"total: {report.scenarios_emitted} scenarios ({types or 'no agents'})")

    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), indent=2) + "\n")

    complaints = []
    for file_report in report.files:
        if file_report.error is not None:
            complaints.append(f"{file_report.path}: {file_report.error}")
        for index, reason in file_report.record_skips:
            complaints.append(f"{file_report.path}: record {index}: {reason}")
        for scenario_id, track_index, reason in file_report.agent_skips:
            complaints.append(f"{file_report.path}: scenario {scenario_id} "
                              f"track {track_index}: {reason}")
    if complaints:
        for line in complaints[:_MAX_LISTED]:
            print(f"skipped: {line}", file=sys.stderr)
        if len(complaints) > _MAX_LISTED:
            print(f"... and {len(complaints) - _MAX_LISTED} more",
                  file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
