"""Kernel estimators for the score s(x) = grad log p(x) and its Jacobian diagonal.

Both estimators regress kernel derivative sums against the kernel matrix with a
ridge term (one Cholesky factorization shared by both solves):

    K[i, j] = exp(-||x_i - x_j||^2 / (2 sigma^2))
    b[i, a] = sum_j -((x_ia - x_ja) / sigma^2) K[i, j]          (first derivative)
    c[i, a] = sum_j ((x_ia - x_ja)^2/sigma^4 - 1/sigma^2) K[i, j]  (second derivative)

    G = (K + eta I)^{-1} b
    H = -G * G + (K + eta I)^{-1} c     (elementwise product)

On data with roughly unit scale the default bandwidth is a dilated median
heuristic: sigma = BANDWIDTH_SCALE * median pairwise distance. The dilation is a
calibration constant fixed against analytic Gaussian oracles (the raw median is
too narrow for accurate Hessian diagonals at n in the hundreds; 3x tracks the
analytic score of standard normals to MSE < 0.1 at n = 500 and keeps the
Jacobian-diagonal variance of true leaves near its population value of zero).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateDataError, NumericalError

__all__ = [
    "BANDWIDTH_SCALE",
    "DEFAULT_ETA",
    "KernelParams",
    "ScoreEstimate",
    "HessianDiagEstimate",
    "median_bandwidth",
    "default_kernel_params",
    "stein_score_estimate",
    "stein_hessian_diag",
]

DEFAULT_ETA = 0.01
BANDWIDTH_SCALE = 3.0


@dataclass(frozen=True)
class KernelParams:
    """RBF bandwidth and ridge regularizer; both strictly positive."""

    bandwidth: float
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise DegenerateDataError(f"bandwidth must be positive, got {self.bandwidth}")
        if not (np.isfinite(self.eta) and self.eta > 0):
            raise NumericalError(f"ridge eta must be positive, got {self.eta}")


@dataclass
class ScoreEstimate:
    """G[i, a] estimates d log p / dx_a at sample i."""

    G: np.ndarray
    params: KernelParams


@dataclass
class HessianDiagEstimate:
    """H[i, a] estimates d^2 log p / dx_a^2 at sample i."""

    H: np.ndarray
    params: KernelParams


def _as_array(samples) -> np.ndarray:
    """Accept a SampleMatrix-like object (has .data) or a plain 2-D array."""
    X = np.asarray(getattr(samples, "data", samples), dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DegenerateDataError(f"expected a 2-D sample array, got shape {X.shape}")
    if X.shape[0] < 2:
        raise DegenerateDataError("need at least 2 samples")
    if not np.isfinite(X).all():
        raise DegenerateDataError("samples contain non-finite values")
    return X


def median_bandwidth(samples) -> float:
    """Median of all n(n-1)/2 pairwise Euclidean distances.

    Raises a degenerate-data error when the median is zero (at least half of
    all sample pairs identical — e.g. all rows equal).
    """
    X = _as_array(samples)
    med = float(np.median(pdist(X)))
    if med <= 0.0:
        raise DegenerateDataError(
            "median pairwise distance is zero (too many identical rows)"
        )
    return med


def default_kernel_params(samples, eta: float = DEFAULT_ETA) -> KernelParams:
    """Calibrated defaults: bandwidth = BANDWIDTH_SCALE x median heuristic."""
    return KernelParams(bandwidth=BANDWIDTH_SCALE * median_bandwidth(samples), eta=eta)


def _solve_estimates(X: np.ndarray, params: KernelParams, want_hessian: bool):
    """Shared kernel construction + ridge solves; returns (G, H-or-None)."""
    sigma = params.bandwidth
    sq = squareform(pdist(X, "sqeuclidean"))
    K = np.exp(-sq / (2.0 * sigma**2))
    S = K.sum(axis=1)
    b = -(X * S[:, None] - K @ X) / sigma**2

    n = X.shape[0]
    A = K + params.eta * np.eye(n)
    try:
        factor = cho_factor(A, lower=True)
        G = cho_solve(factor, b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - SPD by construction
        raise NumericalError(
            f"ridge solve failed (sigma={sigma:.6g}, eta={params.eta:.6g}): {exc}"
        ) from exc
    H = None
    if want_hessian:
        c = (
            X**2 * S[:, None] - 2.0 * X * (K @ X) + K @ (X**2)
        ) / sigma**4 - S[:, None] / sigma**2
        H = -(G * G) + cho_solve(factor, c)
    for name, est in (("score", G), ("hessian diagonal", H)):
        if est is not None and not np.isfinite(est).all():
            cond = float(np.linalg.cond(A))
            raise NumericalError(
                f"non-finite {name} estimate; kernel system condition number "
                f"{cond:.3e} at sigma={sigma:.6g}, eta={params.eta:.6g}"
            )
    return G, H


def stein_score_estimate(samples, params: KernelParams | None = None) -> ScoreEstimate:
    """Estimate the score at every sample; n x d output matching the input."""
    X = _as_array(samples)
    if params is None:
        params = default_kernel_params(samples)
    G, _ = _solve_estimates(X, params, want_hessian=False)
    return ScoreEstimate(G=G, params=params)


def stein_hessian_diag(samples, params: KernelParams | None = None) -> HessianDiagEstimate:
    """Estimate the diagonal of the score's Jacobian at every sample."""
    X = _as_array(samples)
    if params is None:
        params = default_kernel_params(samples)
    _, H = _solve_estimates(X, params, want_hessian=True)
    return HessianDiagEstimate(H=H, params=params)
