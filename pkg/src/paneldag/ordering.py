"""Topological ordering by iterative leaf removal.

In an additive-noise model with Gaussian noise, the diagonal entry of the score
Jacobian belonging to a leaf variable is constant across samples, so the
variable whose estimated Jacobian-diagonal column has the smallest empirical
variance is taken as the current leaf, removed, and the process repeats on the
remaining columns. The order is returned sources-first (the round-1 leaf is the
last element).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, PanelDagError
from .stein import (
    BANDWIDTH_SCALE,
    DEFAULT_ETA,
    KernelParams,
    HessianDiagEstimate,
    median_bandwidth,
    stein_hessian_diag,
)

__all__ = ["OrderConfig", "LeafRound", "TopologicalOrder", "leaf_scores", "estimate_order"]


@dataclass(frozen=True)
class OrderConfig:
    eta: float = DEFAULT_ETA
    bandwidth_scale: float = BANDWIDTH_SCALE
    subsample_cap: int = 5000
    subsample_seed: int = 0


@dataclass
class LeafRound:
    """One leaf-removal round: labels still in play, their variance statistics,
    the chosen leaf (global column index), and the bandwidth used."""

    remaining: tuple[str, ...]
    variances: np.ndarray
    leaf: int
    bandwidth: float


@dataclass
class TopologicalOrder:
    """Permutation of column indices (parents before children) plus the
    per-round leaf trace; ``n_used`` records subsampling, if any."""

    order: list[int]
    labels: tuple[str, ...]
    leaf_trace: list[LeafRound] = field(repr=False)
    n_used: int = 0

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.labels))):
            raise NumericalError("order is not a permutation of the variables")

    @property
    def d(self) -> int:
        return len(self.order)

    def ordered_labels(self) -> list[str]:
        return [self.labels[i] for i in self.order]


def leaf_scores(H) -> np.ndarray:
    """Per-column empirical variance (denominator n - 1) of the Jacobian-diagonal
    estimate; the argmin is the current leaf candidate."""
    M = H.H if isinstance(H, HessianDiagEstimate) else np.asarray(H, dtype=float)
    if M.ndim != 2 or M.shape[0] < 2:
        raise NumericalError("need an n x d matrix with n >= 2 to compute leaf scores")
    return np.var(M, axis=0, ddof=1)


def _default_labels(samples, d: int) -> tuple[str, ...]:
    labels = getattr(samples, "labels", None)
    if labels is None:
        return tuple(f"x{i + 1}" for i in range(d))
    return tuple(labels)


def estimate_order(samples, cfg: OrderConfig = OrderConfig()) -> TopologicalOrder:
    """Estimate a topological order by removing the minimum-variance leaf d times.

    The kernel bandwidth is recomputed every round (the median heuristic depends
    on how many columns remain). Rows are uniformly subsampled (seeded) to
    ``cfg.subsample_cap`` when n exceeds it. Ties at the argmin go to the lowest
    column index.
    """
    X = np.asarray(getattr(samples, "data", samples), dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, d = X.shape
    labels = _default_labels(samples, d)
    if n > cfg.subsample_cap:
        rng = np.random.default_rng(cfg.subsample_seed)
        keep = np.sort(rng.choice(n, size=cfg.subsample_cap, replace=False))
        X = X[keep]
        n = cfg.subsample_cap

    remaining = list(range(d))
    trace: list[LeafRound] = []
    reversed_order: list[int] = []
    for round_idx in range(d):
        sub = X[:, remaining]
        try:
            sigma = cfg.bandwidth_scale * median_bandwidth(sub)
            H = stein_hessian_diag(sub, KernelParams(bandwidth=sigma, eta=cfg.eta))
            V = leaf_scores(H)
        except PanelDagError as exc:
            raise type(exc)(
                f"leaf round {round_idx + 1} over columns "
                f"{[labels[i] for i in remaining]}: {exc}"
            ) from exc
        k = int(np.argmin(V))  # first minimum = lowest remaining column index
        leaf = remaining[k]
        trace.append(
            LeafRound(
                remaining=tuple(labels[i] for i in remaining),
                variances=V.copy(),
                leaf=leaf,
                bandwidth=sigma,
            )
        )
        reversed_order.append(leaf)
        remaining.pop(k)

    return TopologicalOrder(
        order=list(reversed(reversed_order)),
        labels=labels,
        leaf_trace=trace,
        n_used=n,
    )
