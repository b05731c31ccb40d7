"""End-to-end orchestration: ingest/synth -> screen -> order -> prune ->
(metrics on synthetic truth) -> queries, with a deterministic sectioned report.

The report's determinism hash covers structural content only — configuration
echo, kept labels, the order, the pruned edge list, driver ranking labels,
integer metric fields, query archive names and stub response texts. Estimated
floating-point diagnostics (reproducible only to ~1e-9 across BLAS thread
counts) and wall-clock timings are printed but excluded from the hash; graph
exports are byte-exact.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .errors import ConfigError, PanelDagError
from .graphs import CausalGraph, export_graph
from .metrics import MetricsReport, evaluate
from .ordering import OrderConfig, TopologicalOrder, estimate_order
from .panel import TARGET_LABEL, IngestConfig, SampleMatrix, assemble_samples, load_emissions, load_wdi
from .pruning import PruneConfig, prune_edges_detailed
from .queries import CATEGORIES, STYLES, CausalQuery, LlmClientConfig, ask_llm, build_queries
from .screening import ScreenReport, correlation_matrix, screen_variables
from .sem import DEFAULT_FAMILY, SemModel, sample_dag, sample_data, sample_mechanisms
from .stein import BANDWIDTH_SCALE, DEFAULT_ETA

__all__ = ["PipelineConfig", "PipelineReport", "archive_name", "run_pipeline", "write_report"]

STAGES = ("ingest", "screen", "discover", "prune", "evaluate", "query")


@dataclass
class PipelineConfig:
    # data source: exactly one of (wdi_path & emissions_path) or synthetic
    wdi_path: str | None = None
    emissions_path: str | None = None
    indicator_whitelist: list[str] | None = None
    synthetic: dict | None = None  # keys: d, edge_prob, n, optional family

    # ingest window / missingness
    year_start: int = 2000
    year_end: int = 2020
    max_indicator_missing: float = 0.3
    max_row_missing: float = 0.5
    impute: str = "interpolate"

    # screening (None -> mode defaults: 0.1/0.98 real, 0.0/1.0 synthetic)
    method: str = "pearson"
    tau_target: float | None = None
    tau_dup: float | None = None

    # discovery
    eta: float = DEFAULT_ETA
    bandwidth_scale: float = BANDWIDTH_SCALE
    subsample_cap: int = 5000

    # pruning
    alpha: float = 0.001
    basis_size: int = 10

    # queries
    categories: list[str] = field(default_factory=lambda: list(CATEGORIES))
    styles: list[str] = field(default_factory=lambda: list(STYLES))
    query_stub: bool = True
    llm_endpoint: str = LlmClientConfig.endpoint
    llm_model: str = LlmClientConfig.model
    auth_env: str = LlmClientConfig.auth_env

    outdir: str | None = None
    seed: int = 0

    def validate(self) -> None:
        real = self.wdi_path is not None or self.emissions_path is not None
        if real and self.synthetic is not None:
            raise ConfigError("give either real data paths or a synthetic spec, not both")
        if not real and self.synthetic is None:
            raise ConfigError("give either wdi/emissions paths or a synthetic spec")
        if real and (self.wdi_path is None or self.emissions_path is None):
            raise ConfigError("real-data runs need both wdi_path and emissions_path")
        if self.synthetic is not None:
            missing = {"d", "edge_prob", "n"} - set(self.synthetic)
            if missing:
                raise ConfigError(f"synthetic spec is missing {sorted(missing)}")
        for tau, name in ((self.tau_target, "tau_target"), (self.tau_dup, "tau_dup")):
            if tau is not None and not 0.0 <= tau <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError("alpha must be in (0, 1]")

    @property
    def is_synthetic(self) -> bool:
        return self.synthetic is not None

    def screening_thresholds(self) -> tuple[float, float]:
        if self.is_synthetic:
            return (
                self.tau_target if self.tau_target is not None else 0.0,
                self.tau_dup if self.tau_dup is not None else 1.0,
            )
        return (
            self.tau_target if self.tau_target is not None else 0.1,
            self.tau_dup if self.tau_dup is not None else 0.98,
        )

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**payload)

    def echo(self) -> dict:
        """Canonical config dictionary (outdir excluded: it must not affect results)."""
        data = asdict(self)
        data.pop("outdir")
        return data


@dataclass
class PipelineReport:
    config_echo: dict
    stage_status: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    screen: ScreenReport | None = None
    order: TopologicalOrder | None = None
    graph: CausalGraph | None = None
    p_values: np.ndarray | None = None
    target_label: str | None = None
    driver_ranking: list = field(default_factory=list)  # (label, p-value)
    metrics: MetricsReport | None = None
    sem_manifest: str | None = None
    queries: list = field(default_factory=list)  # CausalQuery
    responses: list = field(default_factory=list)  # LlmResponse
    timings: dict = field(default_factory=dict)
    incomplete: bool = False

    # -- determinism hash ------------------------------------------------------

    def _structural_payload(self) -> dict:
        payload = {
            "config": self.config_echo,
            "stages": self.stage_status,
            "incomplete": self.incomplete,
            "target": self.target_label,
        }
        if self.screen is not None:
            payload["kept"] = list(self.screen.kept)
            payload["dropped"] = [list(pair) for pair in self.screen.dropped]
        if self.order is not None:
            payload["order"] = self.order.ordered_labels()
        if self.graph is not None:
            payload["edges"] = [list(e) for e in self.graph.edge_labels()]
        payload["driver_ranking"] = [label for label, _ in self.driver_ranking]
        if self.metrics is not None:
            payload["shd"] = self.metrics.shd
            payload["sid"] = self.metrics.sid
        if self.sem_manifest is not None:
            payload["sem_manifest"] = self.sem_manifest
        payload["prompts"] = [archive_name(q) for q in self.queries]
        payload["responses"] = [r.text for r in self.responses]
        return payload

    @property
    def determinism_hash(self) -> str:
        blob = json.dumps(self._structural_payload(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()

    # -- rendering -------------------------------------------------------------

    def to_text(self) -> str:
        lines: list[str] = ["== causal discovery pipeline report =="]
        if self.incomplete:
            lines.append("!! INCOMPLETE RUN — a stage failed; see stage status !!")
        lines.append("")
        lines.append("[config]")
        lines.append(json.dumps(self.config_echo, sort_keys=True, indent=2))
        lines.append("")
        lines.append("[stages]")
        for stage in STAGES:
            lines.append(f"  {stage}: {self.stage_status.get(stage, 'not reached')}")
        lines.append("")
        if self.warnings:
            lines.append("[warnings]")
            lines.extend(f"  {w}" for w in self.warnings)
            lines.append("")
        if self.screen is not None:
            lines.append("[screen]")
            lines.append(f"  kept ({len(self.screen.kept)}): {' '.join(self.screen.kept)}")
            for label, reason in self.screen.dropped:
                lines.append(f"  dropped {label}: {reason}")
            for note in self.screen.notes:
                lines.append(f"  note: {note}")
            lines.append("")
        if self.order is not None:
            lines.append("[order]")
            lines.append("  " + " -> ".join(self.order.ordered_labels()))
            lines.append(f"  rows used: {self.order.n_used}")
            for idx, rnd in enumerate(self.order.leaf_trace, start=1):
                vs = " ".join(
                    f"{lab}={v:.9f}" for lab, v in zip(rnd.remaining, rnd.variances)
                )
                leaf = self.order.labels[rnd.leaf]
                lines.append(f"  round {idx}: leaf={leaf} bandwidth={rnd.bandwidth:.9f} V: {vs}")
            lines.append("")
        if self.graph is not None:
            lines.append("[graph]")
            lines.append(f"  edges ({self.graph.num_edges}):")
            lines.extend(f"    {u} -> {v}" for u, v in self.graph.edge_labels())
            lines.append("")
        if self.driver_ranking:
            lines.append("[drivers]")
            lines.append(f"  direct parents of {self.target_label}, by pruning p-value:")
            for label, p in self.driver_ranking:
                lines.append(f"    {label}  p={p:.9g}")
            lines.append("")
        if self.metrics is not None:
            m = self.metrics
            lines.append("[metrics]")
            lines.append(f"  shd={m.shd} sid={m.sid}")
            lines.append(
                f"  precision={m.precision:.9f} recall={m.recall:.9f} f1={m.f1:.9f} l2={m.l2:.9f}"
            )
            lines.append("")
        if self.sem_manifest is not None:
            lines.append("[synthetic truth]")
            lines.extend("  " + l for l in self.sem_manifest.rstrip().splitlines())
            lines.append("")
        if self.queries:
            lines.append("[queries]")
            for q, r in zip(self.queries, self.responses):
                lines.append(f"  {archive_name(q)}: {r.text}")
            lines.append("")
        lines.append("[timings]  (excluded from the determinism hash)")
        for stage, secs in self.timings.items():
            lines.append(f"  {stage}: {secs:.3f}s")
        lines.append("")
        lines.append(f"[determinism] hash={self.determinism_hash}")
        lines.append("  covers: config, stages, labels, order, edges, ranking, integer")
        lines.append("  metrics, prompts, responses; excludes floats and timings")
        return "\n".join(lines) + "\n"


def archive_name(query: CausalQuery) -> str:
    return f"{query.driver_code}_{query.category}_{query.style}.txt"


def write_report(report: PipelineReport, outdir) -> None:
    """report.txt + graph exports + one prompt file per query."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.txt").write_text(report.to_text(), encoding="utf-8")
    if report.graph is not None:
        export_graph(report.graph, "edgelist", out / "graph_edges.csv")
        export_graph(report.graph, "dot", out / "graph.dot")
    if report.queries:
        prompt_dir = out / "prompts"
        prompt_dir.mkdir(exist_ok=True)
        for q in report.queries:
            (prompt_dir / archive_name(q)).write_text(q.prompt_text, encoding="utf-8")


def _ingest_real(cfg: PipelineConfig) -> tuple[SampleMatrix, dict]:
    whitelist = set(cfg.indicator_whitelist) if cfg.indicator_whitelist else None
    panel = load_wdi(cfg.wdi_path, indicator_whitelist=whitelist)
    target = load_emissions(cfg.emissions_path)
    samples = assemble_samples(
        panel,
        target,
        IngestConfig(
            year_start=cfg.year_start,
            year_end=cfg.year_end,
            max_indicator_missing=cfg.max_indicator_missing,
            max_row_missing=cfg.max_row_missing,
            impute=cfg.impute,
        ),
    )
    names = {code: name for name, code in panel.indicators}
    names[TARGET_LABEL] = "per-capita CO2 emissions"
    return samples, names


def _ingest_synthetic(cfg: PipelineConfig) -> tuple[SampleMatrix, SemModel]:
    spec = cfg.synthetic
    family = tuple(spec.get("family", DEFAULT_FAMILY))
    graph = sample_dag(int(spec["d"]), float(spec["edge_prob"]), seed=cfg.seed)
    model = sample_mechanisms(graph, family=family, seed=cfg.seed + 1)
    samples = sample_data(model, int(spec["n"]), seed=cfg.seed + 2)
    return samples, model


def run_pipeline(cfg: PipelineConfig) -> PipelineReport:
    """Execute all stages; on stage failure, write the partial report (when an
    output directory is configured) and re-raise with the stage name and seed."""
    cfg.validate()
    report = PipelineReport(config_echo=cfg.echo())
    model: SemModel | None = None
    names: dict = {}

    def fail(stage: str, exc: Exception):
        report.stage_status[stage] = f"failed: {exc}"
        report.incomplete = True
        if cfg.outdir:
            write_report(report, cfg.outdir)
        msg = f"stage {stage!r} failed (replay seed {cfg.seed}): {exc}"
        if isinstance(exc, PanelDagError):
            raise type(exc)(msg) from exc
        raise PanelDagError(msg) from exc

    def run_stage(stage: str, fn):
        start = time.monotonic()
        try:
            result = fn()
        except Exception as exc:  # noqa: BLE001 - converted to a flagged report
            report.timings[stage] = time.monotonic() - start
            fail(stage, exc)
        report.timings[stage] = time.monotonic() - start
        report.stage_status[stage] = "ok"
        return result

    # ingest / synth
    if cfg.is_synthetic:
        samples, model = run_stage("ingest", lambda: _ingest_synthetic(cfg))
        report.sem_manifest = model.to_manifest()
    else:
        samples, names = run_stage("ingest", lambda: _ingest_real(cfg))
    target_label = samples.labels[-1]
    report.target_label = target_label

    # screen
    tau_target, tau_dup = cfg.screening_thresholds()

    def do_screen():
        corr = correlation_matrix(samples, method=cfg.method)
        return screen_variables(corr, target_label, tau_target=tau_target, tau_dup=tau_dup)

    screen = run_stage("screen", do_screen)
    report.screen = screen
    kept_samples = samples.select(screen.kept) if screen.dropped else samples
    if screen.dropped:
        report.warnings.append(
            f"screening dropped {len(screen.dropped)} variable(s); discovery runs on the kept set"
        )

    # discover
    order = run_stage(
        "discover",
        lambda: estimate_order(
            kept_samples,
            OrderConfig(
                eta=cfg.eta,
                bandwidth_scale=cfg.bandwidth_scale,
                subsample_cap=cfg.subsample_cap,
                subsample_seed=cfg.seed,
            ),
        ),
    )
    report.order = order

    # prune
    def do_prune():
        return prune_edges_detailed(
            kept_samples, order, PruneConfig(alpha=cfg.alpha, basis_size=cfg.basis_size)
        )

    graph, pvals = run_stage("prune", do_prune)
    report.graph = graph
    report.p_values = pvals
    t_idx = graph.index_of(target_label)
    ranking = [
        (graph.labels[u], float(pvals[u, t_idx])) for u in graph.parents(t_idx)
    ]
    ranking.sort(key=lambda pair: (pair[1], pair[0]))
    report.driver_ranking = ranking

    # evaluate (synthetic truth only)
    if model is not None:
        def do_metrics():
            truth = model.graph
            if tuple(truth.labels) != tuple(graph.labels):
                truth = truth.subgraph(graph.labels)
                report.warnings.append(
                    "screening removed variables; metrics compare the truth subgraph "
                    "on the kept labels"
                )
            return evaluate(truth, graph)

        report.metrics = run_stage("evaluate", do_metrics)
    else:
        report.stage_status["evaluate"] = "skipped: no ground truth for real data"

    # query
    if cfg.is_synthetic:
        report.stage_status["query"] = (
            "skipped: synthetic variables carry no indicator identity for prompts"
        )
    elif not ranking:
        report.stage_status["query"] = "skipped: pruned graph has no parents of the target"
    else:
        def do_query():
            drivers = [(label, names.get(label, label)) for label, _ in ranking]
            queries = build_queries(
                drivers,
                target=names.get(target_label, target_label),
                categories=cfg.categories,
                styles=cfg.styles,
            )
            client = LlmClientConfig(
                endpoint=cfg.llm_endpoint,
                model=cfg.llm_model,
                auth_env=cfg.auth_env,
                stub=cfg.query_stub,
            )
            responses = [ask_llm(q.prompt_text, client) for q in queries]
            return queries, responses

        report.queries, report.responses = run_stage("query", do_query)

    if cfg.outdir:
        write_report(report, cfg.outdir)
    return report
