#!/usr/bin/env python3
"""Recompute ranking metrics straight from exported experiment artifacts.

Reads the rankings_<method>.json files in a results directory, derives
NDCG and mAP using nothing but the graded rankings stored there, and
compares the outcome against report.json.  The point is independence:
this script shares no code with the library, so agreement means the
exported artifacts really do determine the reported numbers.

Artifact semantics relied on here:

- grades run 0..3; a candidate counts as relevant when its grade is >= 1
- NDCG truncates both the actual and the ideal ranking at the stored
  depth; a query with no graded gain at all contributes 0
- average precision runs over the full ranking and divides by the number
  of relevant candidates; queries without any relevant candidate are
  excluded from the mean

Exit status is 0 when every recomputed value agrees with the report
within the tolerance, 1 otherwise.
"""

import argparse
import json
import math
import sys
from pathlib import Path

TOLERANCE = 1e-9


def dcg(grades, depth):
    return sum(
        (2.0**grade - 1.0) / math.log2(position + 1)
        for position, grade in enumerate(grades[:depth], start=1)
    )


def ndcg_of(grades, depth):
    ideal = dcg(sorted(grades, reverse=True), depth)
    if ideal == 0.0:
        return 0.0
    return dcg(grades, depth) / ideal


def average_precision_of(grades):
    relevant = sum(1 for g in grades if g >= 1)
    if relevant == 0:
        return None
    hits = 0
    total = 0.0
    for position, grade in enumerate(grades, start=1):
        if grade >= 1:
            hits += 1
            total += hits / position
    return total / relevant


def recompute(rankings_path: Path) -> dict:
    payload = json.loads(rankings_path.read_text(encoding="utf-8"))
    depth = payload["depth"]
    grade_lists = [query["grades"] for query in payload["queries"].values()]
    ndcg_values = [ndcg_of(grades, depth) for grades in grade_lists]
    ap_values = [ap for ap in map(average_precision_of, grade_lists) if ap is not None]
    return {
        "NDCG": sum(ndcg_values) / len(ndcg_values),
        "mAP": sum(ap_values) / len(ap_values),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("results_dir", type=Path, help="directory written by the experiment run")
    parser.add_argument("--tolerance", type=float, default=TOLERANCE)
    parser.add_argument("--json", action="store_true", help="print machine readable values")
    args = parser.parse_args(argv)

    report = json.loads((args.results_dir / "report.json").read_text(encoding="utf-8"))
    recomputed = {}
    failures = []
    for method in report["methods"]:
        values = recompute(args.results_dir / f"rankings_{method}.json")
        recomputed[method] = values
        for metric, value in values.items():
            reported = report["metrics"][method][metric]
            if abs(value - reported) > args.tolerance:
                failures.append(
                    f"{method} {metric}: recomputed {value!r} vs reported {reported!r}"
                )

    if args.json:
        print(json.dumps(recomputed, indent=2, sort_keys=True))
    else:
        for method, values in recomputed.items():
            for metric in ("NDCG", "mAP"):
                print(f"{method:10s} {metric:5s} {values[metric]:.10f}")

    if failures:
        for failure in failures:
            print(f"MISMATCH {failure}", file=sys.stderr)
        return 1
    print("all ranking metrics reproduced from artifacts", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
