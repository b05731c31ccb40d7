"""Score-matching causal discovery over indicator panels.

The package chains five capabilities: panel ingestion into standardized
sample matrices, correlation screening, kernelized score/Hessian estimation
with iterative leaf removal, spline-regression edge pruning, and structured
causal prompt generation for the discovered drivers.
"""

from .errors import (
    ConfigError,
    DataError,
    DegenerateDataError,
    DomainError,
    DuplicateKeyError,
    EmptyResultError,
    FormatError,
    LabelMismatchError,
    NumericalError,
    PanelDagError,
    ParseError,
    TransportError,
)
from .graphs import CausalGraph, export_graph, graph_to_dot, graph_to_edgelist
from .metrics import MetricsReport, edge_prf, evaluate, l2_distance, shd, sid
from .ordering import LeafRound, OrderConfig, TopologicalOrder, estimate_order, leaf_scores
from .panel import (
    IndicatorPanel,
    IngestConfig,
    SampleMatrix,
    TargetSeries,
    TARGET_LABEL,
    assemble_samples,
    load_emissions,
    load_wdi,
)
from .pipeline import PipelineConfig, PipelineReport, archive_name, run_pipeline, write_report
from .pruning import PruneConfig, full_graph_from_order, prune_edges, prune_edges_detailed, spline_basis
from .queries import (
    ArticleRecord,
    CATEGORIES,
    CATEGORY_VERBS,
    CausalQuery,
    LiteratureConfig,
    LlmClientConfig,
    LlmResponse,
    STYLES,
    ask_llm,
    build_queries,
    literature_terms,
    render_prompt,
    search_literature,
)
from .screening import CorrelationMatrix, ScreenReport, correlation_matrix, screen_variables
from .sem import (
    DEFAULT_FAMILY,
    MECHANISM_TAGS,
    NodeMechanism,
    SemModel,
    chain_model,
    sample_dag,
    sample_data,
    sample_mechanisms,
)
from .stein import (
    BANDWIDTH_SCALE,
    DEFAULT_ETA,
    HessianDiagEstimate,
    KernelParams,
    ScoreEstimate,
    default_kernel_params,
    median_bandwidth,
    stein_hessian_diag,
    stein_score_estimate,
)

__version__ = "0.1.0"

__all__ = [
    "ArticleRecord",
    "BANDWIDTH_SCALE",
    "CATEGORIES",
    "CATEGORY_VERBS",
    "CausalGraph",
    "CausalQuery",
    "ConfigError",
    "CorrelationMatrix",
    "DEFAULT_ETA",
    "DEFAULT_FAMILY",
    "DataError",
    "DegenerateDataError",
    "DomainError",
    "DuplicateKeyError",
    "EmptyResultError",
    "FormatError",
    "HessianDiagEstimate",
    "IndicatorPanel",
    "IngestConfig",
    "KernelParams",
    "LabelMismatchError",
    "LeafRound",
    "LiteratureConfig",
    "LlmClientConfig",
    "LlmResponse",
    "MECHANISM_TAGS",
    "MetricsReport",
    "NodeMechanism",
    "NumericalError",
    "OrderConfig",
    "PanelDagError",
    "ParseError",
    "PipelineConfig",
    "PipelineReport",
    "PruneConfig",
    "STYLES",
    "SampleMatrix",
    "ScoreEstimate",
    "ScreenReport",
    "SemModel",
    "TARGET_LABEL",
    "TargetSeries",
    "TopologicalOrder",
    "TransportError",
    "archive_name",
    "ask_llm",
    "assemble_samples",
    "build_queries",
    "chain_model",
    "correlation_matrix",
    "default_kernel_params",
    "edge_prf",
    "estimate_order",
    "evaluate",
    "export_graph",
    "full_graph_from_order",
    "graph_to_dot",
    "graph_to_edgelist",
    "l2_distance",
    "leaf_scores",
    "literature_terms",
    "load_emissions",
    "load_wdi",
    "median_bandwidth",
    "prune_edges",
    "prune_edges_detailed",
    "render_prompt",
    "run_pipeline",
    "sample_dag",
    "sample_data",
    "sample_mechanisms",
    "screen_variables",
    "search_literature",
    "shd",
    "sid",
    "spline_basis",
    "stein_hessian_diag",
    "stein_score_estimate",
    "write_report",
]
