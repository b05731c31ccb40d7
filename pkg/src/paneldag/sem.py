"""Synthetic structural-equation ground truth for validating discovery.

Each node is a function of its parents plus independent Gaussian noise:

    x_v = sum_k g(c_k * p_k) + sigma_v * eps,   eps ~ N(0, 1)

with g selected per node from the mechanism family: ``linear`` (identity),
``tanh-mix``, ``quadratic`` (squared), ``sine``. Coefficients act inside the
nonlinearity so that they change the shape of each edge's response, not just a
scale that standardization would erase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError, FormatError
from .graphs import CausalGraph

__all__ = [
    "MECHANISM_TAGS",
    "DEFAULT_FAMILY",
    "NodeMechanism",
    "SemModel",
    "sample_dag",
    "sample_mechanisms",
    "sample_data",
    "chain_model",
]

MECHANISM_TAGS = ("linear", "tanh-mix", "quadratic", "sine")

# Default family for validation ensembles. The quadratic tag stays available but
# is not drawn by default: its heavy tails blur the leaf-variance statistic that
# the ordering stage relies on.
DEFAULT_FAMILY = ("tanh-mix", "sine")

_LINKS = {
    "linear": lambda z: z,
    "tanh-mix": np.tanh,
    "quadratic": np.square,
    "sine": np.sin,
}


@dataclass
class NodeMechanism:
    tag: str
    coefficients: np.ndarray  # one per parent, magnitudes in [0.5, 2]

    def __post_init__(self):
        if self.tag not in MECHANISM_TAGS:
            raise ConfigError(f"unknown mechanism tag {self.tag!r}")
        self.coefficients = np.asarray(self.coefficients, dtype=float)


@dataclass
class SemModel:
    graph: CausalGraph
    mechanisms: list[NodeMechanism] = field(repr=False)
    noise_sigma: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.noise_sigma = np.asarray(self.noise_sigma, dtype=float)
        d = self.graph.d
        if len(self.mechanisms) != d or self.noise_sigma.shape != (d,):
            raise DataError("mechanism/noise count must match the graph dimension")
        for v in range(d):
            if len(self.mechanisms[v].coefficients) != len(self.graph.parents(v)):
                raise DataError(
                    f"node {self.graph.labels[v]}: mechanism arity does not match parent count"
                )
        if not (self.noise_sigma > 0).all():
            raise DataError("noise_sigma must be strictly positive everywhere")

    # -- replay manifest -----------------------------------------------------

    def to_manifest(self) -> str:
        """Deterministic text form (edge list + mechanism table) for replaying runs."""
        lines = ["# sem model", f"nodes: {' '.join(self.graph.labels)}"]
        for u, v in sorted(self.graph.edge_labels()):
            lines.append(f"edge: {u} -> {v}")
        for v, mech in enumerate(self.mechanisms):
            coefs = " ".join(f"{c:.17g}" for c in mech.coefficients)
            lines.append(
                f"mech: {self.graph.labels[v]} {mech.tag} sigma={self.noise_sigma[v]:.17g}"
                + (f" coefs={coefs}" if len(mech.coefficients) else "")
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_manifest(cls, text: str) -> "SemModel":
        labels: tuple[str, ...] = ()
        edges: list[tuple[str, str]] = []
        mechs: dict[str, tuple[str, float, np.ndarray]] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("nodes:"):
                labels = tuple(line.split(":", 1)[1].split())
            elif line.startswith("edge:"):
                u, _, v = line.split(":", 1)[1].split()
                edges.append((u, v))
            elif line.startswith("mech:"):
                parts = line.split(":", 1)[1].split()
                node, tag = parts[0], parts[1]
                sigma = float(parts[2].removeprefix("sigma="))
                coefs = np.array([], dtype=float)
                if len(parts) > 3:
                    coefs = np.array(
                        [float(parts[3].removeprefix("coefs="))]
                        + [float(p) for p in parts[4:]]
                    )
                mechs[node] = (tag, sigma, coefs)
            else:
                raise FormatError(f"unrecognized manifest line: {line!r}")
        if not labels or set(mechs) != set(labels):
            raise FormatError("manifest must list nodes and one mechanism per node")
        graph = CausalGraph.from_edges(labels, edges)
        mechanisms = [NodeMechanism(mechs[l][0], mechs[l][2]) for l in labels]
        sigma = np.array([mechs[l][1] for l in labels])
        return cls(graph, mechanisms, sigma)


def sample_dag(d: int, edge_prob: float, seed: int = 0) -> CausalGraph:
    """Random DAG: draw a uniform permutation, then include each forward edge
    independently with probability ``edge_prob`` (acyclic by construction)."""
    if d < 1:
        raise ConfigError("d must be >= 1")
    if not 0.0 <= edge_prob <= 1.0:
        raise ConfigError("edge_prob must be in [0, 1]")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(d)
    adj = np.zeros((d, d), dtype=bool)
    for a in range(d):
        for b in range(a + 1, d):
            if rng.random() < edge_prob:
                adj[perm[a], perm[b]] = True
    labels = tuple(f"x{i + 1}" for i in range(d))
    return CausalGraph(labels, adj)


def sample_mechanisms(graph: CausalGraph, family=DEFAULT_FAMILY, seed: int = 0) -> SemModel:
    """Draw a mechanism tag per node (uniform over ``family``), coefficients with
    magnitude uniform in [0.5, 2] and random sign, and noise sigma uniform in
    [0.4, 0.8]."""
    family = tuple(sorted(set(family)))
    if not family:
        raise ConfigError("mechanism family must be non-empty")
    for tag in family:
        if tag not in MECHANISM_TAGS:
            raise ConfigError(f"unknown mechanism tag {tag!r}")
    rng = np.random.default_rng(seed)
    mechanisms = []
    for v in range(graph.d):
        k = len(graph.parents(v))
        tag = family[rng.integers(len(family))]
        mag = rng.uniform(0.5, 2.0, size=k)
        sign = np.where(rng.random(k) < 0.5, -1.0, 1.0)
        mechanisms.append(NodeMechanism(tag, mag * sign))
    sigma = rng.uniform(0.4, 0.8, size=graph.d)
    return SemModel(graph, mechanisms, sigma)


def sample_data(model: SemModel, n: int, seed: int = 0):
    """Evaluate the model in topological order on fresh Gaussian noise.

    Returns a standardized SampleMatrix (raw values recoverable through its
    standardization parameters). Requires n >= 2 (a single row cannot be
    standardized).
    """
    from .panel import SampleMatrix  # local import to avoid a cycle

    if n < 2:
        raise ConfigError("need n >= 2 samples")
    rng = np.random.default_rng(seed)
    d = model.graph.d
    eps = rng.standard_normal((n, d))
    raw = np.zeros((n, d))
    for v in model.graph.topological_order():
        mech = model.mechanisms[v]
        link = _LINKS[mech.tag]
        total = np.zeros(n)
        for c, u in zip(mech.coefficients, model.graph.parents(v)):
            total += link(c * raw[:, u])
        raw[:, v] = total + model.noise_sigma[v] * eps[:, v]

    means = raw.mean(axis=0)
    stds = raw.std(axis=0)
    if (stds == 0).any():
        bad = model.graph.labels[int(np.argmin(stds))]
        raise DataError(f"generated column {bad!r} is constant; cannot standardize")
    return SampleMatrix(
        data=(raw - means) / stds,
        labels=model.graph.labels,
        row_keys=[("synthetic", i) for i in range(n)],
        standardization=(means, stds),
    )


def chain_model(
    tags,
    coefficient: float = 1.0,
    root_sigma: float = 1.0,
    noise_sigma: float = 0.5,
) -> SemModel:
    """Canonical chain x1 -> x2 -> ... with one mechanism tag per link.

    The defaults (unit root scale, unit coefficient, link noise 0.5) give chains
    whose leaf-variance margins are comfortably detectable at n around 1000 —
    the reference construction used by the validation batteries.
    """
    tags = list(tags)
    d = len(tags) + 1
    labels = tuple(f"x{i + 1}" for i in range(d))
    adj = np.zeros((d, d), dtype=bool)
    for i in range(d - 1):
        adj[i, i + 1] = True
    graph = CausalGraph(labels, adj)
    mechanisms = [NodeMechanism("linear", np.array([]))]
    mechanisms += [NodeMechanism(tag, np.array([coefficient])) for tag in tags]
    sigma = np.array([root_sigma] + [noise_sigma] * (d - 1))
    return SemModel(graph, mechanisms, sigma)
