"""Command-line front end.

Subcommands mirror the pipeline stages (``ingest``, ``screen``, ``discover``,
``prune``, ``evaluate``, ``query``, ``synth``) plus ``run`` for the whole
chain. Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
error, 5 transport error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import PanelDagError
from .graphs import CausalGraph, export_graph
from .metrics import evaluate
from .ordering import OrderConfig, TopologicalOrder, estimate_order
from .panel import IngestConfig, SampleMatrix, assemble_samples, load_emissions, load_wdi
from .pipeline import PipelineConfig, run_pipeline
from .pruning import PruneConfig, prune_edges_detailed
from .queries import CATEGORIES, STYLES, LlmClientConfig, ask_llm, build_queries
from .screening import correlation_matrix, screen_variables
from .sem import DEFAULT_FAMILY, sample_dag, sample_data, sample_mechanisms
from .stein import BANDWIDTH_SCALE, DEFAULT_ETA

DEFAULTS = {
    "ingest.year_start": 2000,
    "ingest.year_end": 2020,
    "ingest.max_indicator_missing": 0.3,
    "ingest.max_row_missing": 0.5,
    "ingest.impute": "interpolate",
    "screen.method": "pearson",
    "screen.tau_target (real data)": 0.1,
    "screen.tau_dup (real data)": 0.98,
    "screen.tau_target (synthetic)": 0.0,
    "screen.tau_dup (synthetic)": 1.0,
    "discover.eta": DEFAULT_ETA,
    "discover.bandwidth_scale": BANDWIDTH_SCALE,
    "discover.subsample_cap": 5000,
    "prune.alpha": 0.001,
    "prune.basis_size": 10,
    "query.categories": " ".join(CATEGORIES),
    "query.styles": " ".join(STYLES),
    "query.stub": True,
    "query.auth_env": LlmClientConfig.auth_env,
    "synth.family": " ".join(DEFAULT_FAMILY),
    "exit codes": "0 ok, 2 config, 3 data, 4 numerical, 5 transport",
}


def explain_config() -> str:
    width = max(len(k) for k in DEFAULTS)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in DEFAULTS.items())


def _load_samples(path) -> SampleMatrix:
    return SampleMatrix.from_csv(path)


def _load_order(path) -> TopologicalOrder:
    payload = json.loads(open(path, encoding="utf-8").read())
    # reconstruct without the trace (exports carry only order + labels)
    return TopologicalOrder(
        order=payload["order"], labels=tuple(payload["labels"]), leaf_trace=[], n_used=payload.get("n_used", 0)
    )


def cmd_ingest(args) -> int:
    panel = load_wdi(args.wdi, set(args.whitelist) if args.whitelist else None)
    target = load_emissions(args.emissions)
    samples = assemble_samples(
        panel,
        target,
        IngestConfig(
            year_start=args.year_start,
            year_end=args.year_end,
            max_indicator_missing=args.max_indicator_missing,
            max_row_missing=args.max_row_missing,
            impute=args.impute,
        ),
    )
    samples.to_csv(args.out)
    print(f"wrote {samples.n} x {samples.d} sample matrix to {args.out}")
    return 0


def cmd_screen(args) -> int:
    samples = _load_samples(args.samples)
    corr = correlation_matrix(samples, method=args.method)
    target = args.target or samples.labels[-1]
    rep = screen_variables(corr, target, tau_target=args.tau_target, tau_dup=args.tau_dup)
    print(json.dumps({"kept": rep.kept, "dropped": rep.dropped, "notes": rep.notes}, indent=2))
    return 0


def cmd_discover(args) -> int:
    samples = _load_samples(args.samples)
    order = estimate_order(
        samples,
        OrderConfig(eta=args.eta, subsample_cap=args.subsample_cap, subsample_seed=args.seed),
    )
    payload = {
        "order": order.order,
        "labels": list(order.labels),
        "ordered_labels": order.ordered_labels(),
        "n_used": order.n_used,
        "rounds": [
            {
                "remaining": list(r.remaining),
                "variances": [float(v) for v in r.variances],
                "leaf": order.labels[r.leaf],
                "bandwidth": r.bandwidth,
            }
            for r in order.leaf_trace
        ],
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote order to {args.out}")
    else:
        print(text)
    return 0


def cmd_prune(args) -> int:
    samples = _load_samples(args.samples)
    order = _load_order(args.order)
    graph, _ = prune_edges_detailed(
        samples, order, PruneConfig(alpha=args.alpha, basis_size=args.basis_size)
    )
    export_graph(graph, "edgelist", args.out_prefix + "_edges.csv")
    export_graph(graph, "dot", args.out_prefix + ".dot")
    print(f"kept {graph.num_edges} edges; exports at {args.out_prefix}_edges.csv / .dot")
    return 0


def _graph_from_edgelist(path, labels) -> CausalGraph:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "from,to":
            raise PanelDagError(f"{path}: expected a 'from,to' edge-list header")
        edges = [tuple(line.strip().split(",")) for line in fh if line.strip()]
    return CausalGraph.from_edges(labels, edges)


def cmd_evaluate(args) -> int:
    labels = args.labels.split(",")
    g_true = _graph_from_edgelist(args.true_edges, labels)
    g_est = _graph_from_edgelist(args.est_edges, labels)
    m = evaluate(g_true, g_est)
    print(
        json.dumps(
            {
                "shd": m.shd,
                "sid": m.sid,
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
                "l2": m.l2,
            },
            indent=2,
        )
    )
    return 0


def cmd_query(args) -> int:
    drivers = []
    for spec in args.drivers:
        code, _, name = spec.partition("=")
        drivers.append((code, name or code))
    queries = build_queries(
        drivers,
        target=args.target,
        categories=args.categories.split(",") if args.categories else None,
        styles=args.styles.split(",") if args.styles else None,
    )
    client = LlmClientConfig(stub=not args.live, auth_env=args.auth_env)
    from pathlib import Path

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for q in queries:
        name = f"{q.driver_code}_{q.category}_{q.style}.txt"
        (outdir / name).write_text(q.prompt_text, encoding="utf-8")
        response = ask_llm(q.prompt_text, client)
        (outdir / name.replace(".txt", ".response.txt")).write_text(
            response.text, encoding="utf-8"
        )
    print(f"archived {len(queries)} prompts to {outdir}")
    return 0


def cmd_synth(args) -> int:
    graph = sample_dag(args.d, args.edge_prob, seed=args.seed)
    model = sample_mechanisms(graph, family=tuple(args.family.split(",")), seed=args.seed + 1)
    samples = sample_data(model, args.n, seed=args.seed + 2)
    samples.to_csv(args.out)
    if args.manifest:
        with open(args.manifest, "w", encoding="utf-8") as fh:
            fh.write(model.to_manifest())
    print(f"wrote {samples.n} x {samples.d} synthetic samples to {args.out}")
    return 0


def cmd_run(args) -> int:
    cfg = PipelineConfig.from_file(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.outdir:
        cfg.outdir = args.outdir
    report = run_pipeline(cfg)
    if not cfg.outdir:
        sys.stdout.write(report.to_text())
    else:
        print(f"report written to {cfg.outdir}/report.txt")
        print(f"determinism hash: {report.determinism_hash}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paneldag",
        description="Correlation screening, score-matching causal discovery, and "
        "taxonomy-structured causal prompts over indicator panels.",
    )
    parser.add_argument(
        "--explain-config", action="store_true", help="print every numeric default and exit"
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("ingest", help="build a sample matrix from WDI + emissions files")
    p.add_argument("--wdi", required=True)
    p.add_argument("--emissions", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--whitelist", nargs="*", default=None, metavar="CODE")
    p.add_argument("--year-start", type=int, default=2000, dest="year_start")
    p.add_argument("--year-end", type=int, default=2020, dest="year_end")
    p.add_argument("--max-indicator-missing", type=float, default=0.3)
    p.add_argument("--max-row-missing", type=float, default=0.5)
    p.add_argument("--impute", choices=["interpolate", "median"], default="interpolate")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("screen", help="correlation screen of a sample matrix")
    p.add_argument("--samples", required=True)
    p.add_argument("--target", default=None, help="target label (default: last column)")
    p.add_argument("--method", choices=["pearson", "spearman"], default="pearson")
    p.add_argument("--tau-target", type=float, default=0.1)
    p.add_argument("--tau-dup", type=float, default=0.98)
    p.set_defaults(fn=cmd_screen)

    p = sub.add_parser("discover", help="estimate a topological order")
    p.add_argument("--samples", required=True)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--subsample-cap", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_discover)

    p = sub.add_parser("prune", help="prune the order-implied full graph")
    p.add_argument("--samples", required=True)
    p.add_argument("--order", required=True, help="JSON produced by discover")
    p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--basis-size", type=int, default=10)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(fn=cmd_prune)

    p = sub.add_parser("evaluate", help="compare two edge-list graphs")
    p.add_argument("--true-edges", required=True)
    p.add_argument("--est-edges", required=True)
    p.add_argument("--labels", required=True, help="comma-separated node labels")
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("query", help="render and dispatch causal prompts")
    p.add_argument("--drivers", nargs="+", required=True, metavar="CODE=NAME")
    p.add_argument("--target", required=True)
    p.add_argument("--categories", default=None, help="comma-separated subset")
    p.add_argument("--styles", default=None, help="comma-separated subset")
    p.add_argument("--live", action="store_true", help="hit the configured endpoint")
    p.add_argument("--auth-env", default=LlmClientConfig.auth_env)
    p.add_argument("--outdir", required=True)
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser("synth", help="sample a synthetic ground-truth dataset")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--edge-prob", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", default=",".join(DEFAULT_FAMILY))
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("run", help="run the whole pipeline from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.add_argument("--outdir", default=None, help="overrides the config outdir")
    p.set_defaults(fn=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.explain_config:
        print(explain_config())
        return 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        return args.fn(args)
    except PanelDagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
