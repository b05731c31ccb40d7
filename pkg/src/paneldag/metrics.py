"""Graph recovery metrics: SHD, SID, directed-edge precision/recall/F1, L2.

SID follows the structural-intervention-distance definition: for every ordered
pair (i, j) the estimated graph's parent set of i is used as an adjustment set,
and the pair counts as an error when that set is not valid for identifying
p(x_j | do(x_i)) in the true graph. Validity is the complete graphical
adjustment criterion — no forbidden nodes in the set, plus d-separation of i
and j given the set in the proper back-door graph — decided here with a
Bayes-ball reachability pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, LabelMismatchError
from .graphs import CausalGraph

__all__ = ["MetricsReport", "shd", "sid", "edge_prf", "l2_distance", "evaluate"]


@dataclass
class MetricsReport:
    shd: int
    sid: int
    precision: float
    recall: float
    f1: float
    l2: float

    def __post_init__(self):
        if self.shd < 0 or self.sid < 0 or self.l2 < 0:
            raise DataError("distances cannot be negative")
        for name in ("precision", "recall", "f1"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DataError(f"{name} must lie in [0, 1]")
        expected = 0.0
        if self.precision + self.recall > 0:
            expected = 2 * self.precision * self.recall / (self.precision + self.recall)
        if abs(self.f1 - expected) > 1e-12:
            raise DataError("f1 must be the harmonic mean of precision and recall")


def _check_alignment(g_true: CausalGraph, g_est: CausalGraph) -> None:
    if g_true.labels != g_est.labels:
        raise LabelMismatchError(
            f"graphs are over different labels: {g_true.labels} vs {g_est.labels}"
        )


def shd(g_true: CausalGraph, g_est: CausalGraph) -> int:
    """Structural Hamming distance, reversal counts one: per unordered pair,
    +1 for a missing or extra skeleton edge, +1 for a present but flipped edge."""
    _check_alignment(g_true, g_est)
    A, B = g_true.adjacency, g_est.adjacency
    sk_a, sk_b = A | A.T, B | B.T
    total = 0
    d = g_true.d
    for i in range(d):
        for j in range(i + 1, d):
            if sk_a[i, j] != sk_b[i, j]:
                total += 1
            elif sk_a[i, j] and A[i, j] != B[i, j]:
                total += 1
    return total


# -- SID ----------------------------------------------------------------------


def _dsep_bayes_ball(adj: np.ndarray, src: int, dst: int, given: frozenset) -> bool:
    """True iff src and dst are d-separated by ``given`` in the DAG ``adj``."""
    d = adj.shape[0]
    parents = [np.nonzero(adj[:, v])[0] for v in range(d)]
    children = [np.nonzero(adj[v])[0] for v in range(d)]
    # states: (node, arrived-from-child?)
    seen = set()
    stack = [(src, True)]
    while stack:
        v, from_child = stack.pop()
        if (v, from_child) in seen:
            continue
        seen.add((v, from_child))
        if v == dst:
            return False
        if from_child:
            if v not in given:
                stack.extend((p, True) for p in parents[v])
                stack.extend((c, False) for c in children[v])
        else:
            if v in given:
                stack.extend((p, True) for p in parents[v])
            else:
                stack.extend((c, False) for c in children[v])
    return True


def _valid_adjustment(g: CausalGraph, reach: np.ndarray, i: int, j: int, Z: frozenset) -> bool:
    """Complete adjustment criterion for (i, j) with set Z in DAG g.

    ``reach`` is the strict-descendant reachability matrix of g.
    """
    d = g.d
    # causal-path nodes: w != i with i ->* w and w ->* j (or w == j)
    cn = [
        w
        for w in range(d)
        if w != i and reach[i, w] and (w == j or reach[w, j])
    ]
    forbidden = set(cn) | {i}
    for w in cn:
        forbidden.update(np.nonzero(reach[w])[0].tolist())
    if Z & forbidden:
        return False
    # proper back-door graph: remove first edges of proper causal paths
    adj = g.adjacency.copy()
    for w in cn:
        adj[i, w] = False
    return _dsep_bayes_ball(adj, i, j, Z)


def sid(g_true: CausalGraph, g_est: CausalGraph) -> int:
    """Count of ordered pairs (i, j) whose interventional distribution would be
    miscomputed using the estimated graph's parent set of i as the adjustment
    set in the true graph."""
    _check_alignment(g_true, g_est)
    d = g_true.d
    reach = g_true.descendants()
    total = 0
    for i in range(d):
        Z = frozenset(g_est.parents(i))
        for j in range(d):
            if j == i:
                continue
            if j in Z:
                # conditioning on the effect: wrong exactly when j truly reacts to i
                if reach[i, j]:
                    total += 1
            elif not _valid_adjustment(g_true, reach, i, j, Z):
                total += 1
    return total


# -- edge-set metrics ----------------------------------------------------------


def edge_prf(g_true: CausalGraph, g_est: CausalGraph) -> tuple[float, float, float]:
    """Precision/recall/F1 over directed edges. Conventions: an empty estimate
    has precision 1 against an empty truth and 0 otherwise; recall is 1
    whenever the truth is empty."""
    _check_alignment(g_true, g_est)
    true_edges = set(g_true.edges())
    est_edges = set(g_est.edges())
    tp = len(true_edges & est_edges)
    if est_edges:
        precision = tp / len(est_edges)
    else:
        precision = 1.0 if not true_edges else 0.0
    recall = tp / len(true_edges) if true_edges else 1.0
    f1 = 0.0
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def l2_distance(g_true: CausalGraph, g_est: CausalGraph) -> float:
    """Frobenius norm of the adjacency difference: sqrt(#disagreeing entries)."""
    _check_alignment(g_true, g_est)
    return float(np.sqrt((g_true.adjacency != g_est.adjacency).sum()))


def evaluate(g_true: CausalGraph, g_est: CausalGraph) -> MetricsReport:
    """All four metrics bundled, with the report's internal invariants checked."""
    p, r, f1 = edge_prf(g_true, g_est)
    report = MetricsReport(
        shd=shd(g_true, g_est),
        sid=sid(g_true, g_est),
        precision=p,
        recall=r,
        f1=f1,
        l2=l2_distance(g_true, g_est),
    )
    d = g_true.d
    if report.sid > d * (d - 1) or report.shd > d * (d - 1) // 2:
        raise DataError("metric exceeded its combinatorial bound")  # pragma: no cover
    return report
