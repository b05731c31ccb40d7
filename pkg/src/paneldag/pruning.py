"""Edge pruning on an order-implied full graph via additive spline regressions.

For each node v with predecessors P in the order, x_v is regressed on an
intercept plus one B-spline basis block per u in P; each edge u -> v is kept iff
the nested-model F-test for dropping u's block is significant at ``alpha``.
Deterministic by construction (fixed basis, ordinary least squares) and
verifiable against a closed-form F oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BSpline
from scipy.stats import f as f_dist

from .errors import ConfigError, DataError, DegenerateDataError
from .graphs import CausalGraph
from .ordering import TopologicalOrder

__all__ = [
    "PruneConfig",
    "full_graph_from_order",
    "spline_basis",
    "prune_edges",
    "prune_edges_detailed",
]


@dataclass(frozen=True)
class PruneConfig:
    alpha: float = 0.001
    basis_size: int = 10

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError("alpha must be in (0, 1]")
        if self.basis_size < 2:
            raise ConfigError("basis_size must be >= 2")


def full_graph_from_order(order: TopologicalOrder) -> CausalGraph:
    """Maximal DAG consistent with the order: u -> v iff u precedes v."""
    d = order.d
    adj = np.zeros((d, d), dtype=bool)
    for pos, u in enumerate(order.order):
        for v in order.order[pos + 1 :]:
            adj[u, v] = True
    return CausalGraph(order.labels, adj)


def spline_basis(x, basis_size: int) -> np.ndarray:
    """B-spline basis with ``basis_size`` functions evaluated at each sample.

    Cubic when basis_size allows (degree = min(3, basis_size - 1)); interior
    knots sit at equispaced quantiles of x, clamped at the sample range. Rows
    sum to 1 (partition of unity). Tied data that collapses (or nearly
    collapses) the quantile knots falls back to equispaced knots on the range.
    """
    x = np.asarray(x, dtype=float).ravel()
    if basis_size < 2:
        raise ConfigError("basis_size must be >= 2")
    lo, hi = float(np.min(x)), float(np.max(x))
    if lo == hi:
        raise DegenerateDataError("cannot build a spline basis on a constant column")
    degree = min(3, basis_size - 1)
    n_interior = basis_size - degree - 1
    if n_interior > 0:
        interior = np.quantile(x, np.linspace(0.0, 1.0, n_interior + 2)[1:-1])
        # near-coincident knots make the evaluation divide by (almost) zero
        gaps = np.diff(np.concatenate([[lo], interior, [hi]]))
        if gaps.min() <= 1e-9 * (hi - lo):
            interior = np.linspace(lo, hi, n_interior + 2)[1:-1]
    else:
        interior = np.array([])
    knots = np.concatenate([[lo] * (degree + 1), interior, [hi] * (degree + 1)])
    design = BSpline.design_matrix(x, knots, degree, extrapolate=False)
    return design.toarray()


def _lstsq_rss(design: np.ndarray, y: np.ndarray) -> tuple[float, int]:
    beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ beta
    return float(resid @ resid), int(rank)


def prune_edges(samples, order: TopologicalOrder, cfg: PruneConfig = PruneConfig()) -> CausalGraph:
    """Pruned graph (subset of the order-implied full graph)."""
    graph, _ = prune_edges_detailed(samples, order, cfg)
    return graph


def prune_edges_detailed(
    samples, order: TopologicalOrder, cfg: PruneConfig = PruneConfig()
) -> tuple[CausalGraph, np.ndarray]:
    """Pruned graph plus the d x d matrix of edge p-values (NaN off the
    candidate set).

    Degenerate predecessors (constant column) and collinear basis blocks are
    reported with a warning and treated as not significant. Requires
    n > d * basis_size + 1 so the largest regression keeps residual degrees of
    freedom.
    """
    X = np.asarray(getattr(samples, "data", samples), dtype=float)
    n, d = X.shape
    labels = getattr(samples, "labels", None)
    if labels is not None and tuple(labels) != tuple(order.labels):
        raise DataError("sample labels do not match the order's labels")
    if d != order.d:
        raise DataError("sample dimension does not match the order")
    if n <= d * cfg.basis_size + 1:
        raise DataError(
            f"need n > d * basis_size + 1 = {d * cfg.basis_size + 1} rows, got {n}"
        )

    blocks: list[np.ndarray | None] = []
    for j in range(d):
        try:
            blocks.append(spline_basis(X[:, j], cfg.basis_size))
        except DegenerateDataError:
            warnings.warn(
                f"column {order.labels[j]!r} is constant; its edges are treated "
                "as not significant"
            )
            blocks.append(None)

    adj = np.zeros((d, d), dtype=bool)
    pvals = np.full((d, d), np.nan)
    intercept = np.ones((n, 1))
    for pos, v in enumerate(order.order):
        preds = order.order[:pos]
        if not preds:
            continue
        y = X[:, v]
        usable = [u for u in preds if blocks[u] is not None]
        full_design = np.hstack([intercept] + [blocks[u] for u in usable]) if usable else intercept
        rss_full, rank_full = _lstsq_rss(full_design, y)
        dof_resid = n - rank_full
        for u in preds:
            if blocks[u] is None:
                pvals[u, v] = 1.0
                continue
            reduced = [intercept] + [blocks[w] for w in usable if w != u]
            rss_red, rank_red = _lstsq_rss(np.hstack(reduced), y)
            df_num = rank_full - rank_red
            if df_num <= 0:
                warnings.warn(
                    f"basis block of {order.labels[u]!r} is collinear with the "
                    f"other predecessors of {order.labels[v]!r}; edge treated as "
                    "not significant"
                )
                pvals[u, v] = 1.0
                continue
            if dof_resid <= 0 or rss_full <= 0.0:
                # perfect fit: the block's contribution is maximally significant
                pvals[u, v] = 0.0
            else:
                f_stat = max(0.0, rss_red - rss_full) / df_num / (rss_full / dof_resid)
                pvals[u, v] = float(f_dist.sf(f_stat, df_num, dof_resid))
            if pvals[u, v] < cfg.alpha:
                adj[u, v] = True

    return CausalGraph(order.labels, adj), pvals
