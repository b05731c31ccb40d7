"""Correlation screening: drop variables unrelated to the target and collapse
near-duplicate pairs before the expensive discovery stage."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import ConfigError, DataError, DegenerateDataError

__all__ = ["CorrelationMatrix", "ScreenReport", "correlation_matrix", "screen_variables"]


@dataclass
class CorrelationMatrix:
    method: str
    values: np.ndarray = field(repr=False)
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        self.labels = tuple(self.labels)
        d = len(self.labels)
        if self.values.shape != (d, d):
            raise DataError("correlation matrix shape must match labels")
        if np.abs(self.values - self.values.T).max() > 1e-12:
            raise DataError("correlation matrix must be symmetric")
        if np.abs(np.diag(self.values) - 1.0).max() > 1e-12:
            raise DataError("correlation matrix must have a unit diagonal")
        if np.abs(self.values).max() > 1.0 + 1e-12:
            raise DataError("correlations must lie in [-1, 1]")

    def value(self, a: str, b: str) -> float:
        return float(self.values[self.labels.index(a), self.labels.index(b)])


@dataclass
class ScreenReport:
    kept: list[str]
    dropped: list[tuple[str, str]]  # (label, reason)
    tau_target: float
    tau_dup: float
    notes: list[str] = field(default_factory=list)


def correlation_matrix(samples, method: str = "pearson") -> CorrelationMatrix:
    """Pearson sample correlation, or Spearman = Pearson on fractional ranks
    (ties averaged). Needs n >= 3 and no constant columns."""
    if method not in ("pearson", "spearman"):
        raise ConfigError(f"unknown correlation method {method!r}")
    X = np.asarray(getattr(samples, "data", samples), dtype=float)
    labels = tuple(getattr(samples, "labels", tuple(f"x{i+1}" for i in range(X.shape[1]))))
    if X.shape[0] < 3:
        raise DataError("need at least 3 rows for a correlation screen")
    stds = X.std(axis=0)
    if (stds == 0).any():
        bad = labels[int(np.argmin(stds))]
        raise DegenerateDataError(f"column {bad!r} is constant")
    if method == "spearman":
        X = np.column_stack([rankdata(X[:, j]) for j in range(X.shape[1])])
    C = np.corrcoef(X, rowvar=False)
    C = np.clip((C + C.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(C, 1.0)
    return CorrelationMatrix(method=method, values=C, labels=labels)


def screen_variables(
    corr: CorrelationMatrix,
    target_label: str,
    tau_target: float = 0.1,
    tau_dup: float = 0.98,
) -> ScreenReport:
    """Two-pass screen.

    1. Drop every variable whose |correlation to the target| is below
       ``tau_target``.
    2. Among survivors, visit pairs with |corr| >= ``tau_dup`` (strongest pair
       first, then label order) and drop the member with the weaker target
       correlation (tie: the lexicographically larger label goes). Pairs
       involving the target drop nothing — the twin is kept and noted.
    """
    if not (0.0 <= tau_target < tau_dup <= 1.0):
        raise ConfigError("need 0 <= tau_target < tau_dup <= 1")
    if target_label not in corr.labels:
        raise ConfigError(f"target label {target_label!r} not present")
    labels = list(corr.labels)
    t = labels.index(target_label)
    to_target = np.abs(corr.values[:, t])

    dropped: dict[str, str] = {}
    notes: list[str] = []
    for j, label in enumerate(labels):
        if label != target_label and to_target[j] < tau_target:
            dropped[label] = "below-target-threshold"

    alive = [l for l in labels if l not in dropped]
    pairs = []
    for a_pos, a in enumerate(alive):
        for b in alive[a_pos + 1 :]:
            r = abs(corr.value(a, b))
            if r >= tau_dup:
                pairs.append((-r, min(a, b), max(a, b), a, b))
    pairs.sort()
    for _, _, _, a, b in pairs:
        if a in dropped or b in dropped:
            continue
        if target_label in (a, b):
            twin = b if a == target_label else a
            notes.append(f"{twin} near-duplicates the target (kept)")
            continue
        ra, rb = to_target[labels.index(a)], to_target[labels.index(b)]
        if ra > rb:
            victim, keeper = b, a
        elif rb > ra:
            victim, keeper = a, b
        else:
            victim, keeper = max(a, b), min(a, b)
        dropped[victim] = f"near-duplicate-of {keeper}"

    kept = [l for l in labels if l not in dropped]
    return ScreenReport(
        kept=kept,
        dropped=sorted(dropped.items()),
        tau_target=tau_target,
        tau_dup=tau_dup,
        notes=notes,
    )
