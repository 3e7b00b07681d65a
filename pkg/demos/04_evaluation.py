#!/usr/bin/env python3
"""Run the full evaluation pipeline and show the metric report.

Writes artifacts to ./demo-results.  The same run is available as
`collabrec experiment`; afterwards the exported rankings can be checked
independently with demos/recompute_metrics.py.

    python3 demos/04_evaluation.py
"""

from collabrec import load_demo_profiles, run_experiment
from collabrec.demo import DEMO_TARGET_ID, demo_embedding_provider
from collabrec.pipeline import format_report_table

result = run_experiment(
    load_demo_profiles(),
    "demo-results",
    seed=42,
    provider=demo_embedding_provider(),
    target_ids=(DEMO_TARGET_ID,),
)

print(format_report_table(result.metrics, result.methods))
print(f"\nartifacts in {result.out_dir}:")
for path in sorted(result.out_dir.iterdir()):
    print(f"  {path.name}")
print("\nverify the ranking metrics from the artifacts alone with:")
print(f"  python3 demos/recompute_metrics.py {result.out_dir}")
