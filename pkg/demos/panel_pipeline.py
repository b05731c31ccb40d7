"""End-to-end run on the bundled development-indicator panel.

Ingests the packaged 40-economy fixture, screens indicators against per-capita
carbon emissions, discovers a variable order, prunes edges, and renders causal
prompts for every surviving driver.  Everything is written to a temporary
output directory so the report files can be listed afterwards.
"""

import pathlib
import tempfile
from importlib.resources import files

from paneldag import PipelineConfig, run_pipeline

outdir = pathlib.Path(tempfile.mkdtemp(prefix="paneldag_demo_"))
cfg = PipelineConfig(
    wdi_path=str(files("paneldag").joinpath("data/mini_wdi.csv")),
    emissions_path=str(files("paneldag").joinpath("data/emissions.csv")),
    seed=0,
    outdir=str(outdir),
)
report = run_pipeline(cfg)

print("stage status")
for stage, status in report.stage_status.items():
    print(f"  {stage:10s} {status}")

print(f"\ntarget: {report.target_label}")
print(f"screened variables: {len(report.screen.kept)} kept, "
      f"{len(report.screen.dropped)} dropped")
print(f"order: {' -> '.join(report.order.ordered_labels())}")
print(f"pruned graph: {report.graph.num_edges} edges")

print("\ndriver ranking (edge into target, by p-value)")
for label, p in report.driver_ranking:
    print(f"  {label:22s} p={p:.3g}")

print(f"\nprompts rendered: {len(report.queries)} "
      f"({len(report.responses)} stub responses)")
print(f"determinism hash: {report.determinism_hash}")

print(f"\nfiles under {outdir}:")
for path in sorted(outdir.rglob("*")):
    if path.is_file():
        print(f"  {path.relative_to(outdir)}")
