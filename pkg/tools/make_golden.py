"""Freeze the golden synthetic pipeline run (seed 7) used by the determinism
test. Rerun only when an intentional behavior change invalidates the frozen
values; the test failing without such a change means determinism broke.
"""

import json
import pathlib

from paneldag import PipelineConfig, run_pipeline

HERE = pathlib.Path(__file__).resolve().parent
OUT = HERE.parent / "tests" / "data" / "golden_synth_seed7.json"

SPEC = {"d": 5, "edge_prob": 0.4, "n": 1000}
SEED = 7


def main():
    report = run_pipeline(PipelineConfig(synthetic=dict(SPEC), seed=SEED))
    payload = {
        "synthetic": SPEC,
        "seed": SEED,
        "determinism_hash": report.determinism_hash,
        "order": report.order.ordered_labels(),
        "edges": [list(e) for e in report.graph.edge_labels()],
        "shd": report.metrics.shd,
        "sid": report.metrics.sid,
        "stage_status": report.stage_status,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
