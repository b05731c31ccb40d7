"""Directed acyclic causal graphs and their file exports."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError

__all__ = ["CausalGraph", "export_graph", "graph_to_dot", "graph_to_edgelist"]


@dataclass
class CausalGraph:
    """Boolean adjacency over labelled nodes; entry (i, j) true means edge i -> j.

    Self-loops are rejected and acyclicity is verified on construction (a
    topological sort must exist).
    """

    labels: tuple[str, ...]
    adjacency: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.labels = tuple(str(l) for l in self.labels)
        self.adjacency = np.asarray(self.adjacency, dtype=bool)
        d = len(self.labels)
        if len(set(self.labels)) != d:
            raise DataError("graph labels must be unique")
        if self.adjacency.shape != (d, d):
            raise DataError(
                f"adjacency shape {self.adjacency.shape} does not match {d} labels"
            )
        if self.adjacency.diagonal().any():
            raise DataError("self-loops are not allowed")
        self.topological_order()  # raises if cyclic

    # -- basic views ---------------------------------------------------------

    @property
    def d(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.sum())

    def edges(self) -> list[tuple[int, int]]:
        """Edge index pairs (u, v), row-major order."""
        return [(int(u), int(v)) for u, v in zip(*np.nonzero(self.adjacency))]

    def edge_labels(self) -> list[tuple[str, str]]:
        return [(self.labels[u], self.labels[v]) for u, v in self.edges()]

    def parents(self, j: int | str) -> list[int]:
        j = self.index_of(j) if isinstance(j, str) else int(j)
        return [int(i) for i in np.nonzero(self.adjacency[:, j])[0]]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ConfigError(f"unknown label {label!r}") from None

    def topological_order(self) -> list[int]:
        """Kahn's algorithm with lexicographic-label tie-breaking (deterministic)."""
        indeg = self.adjacency.sum(axis=0).astype(int)
        ready = sorted(np.nonzero(indeg == 0)[0], key=lambda i: self.labels[i])
        out: list[int] = []
        indeg = indeg.copy()
        while ready:
            u = ready.pop(0)
            out.append(int(u))
            for v in np.nonzero(self.adjacency[u])[0]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    # keep the ready list sorted by label
                    ready.append(int(v))
                    ready.sort(key=lambda i: self.labels[i])
        if len(out) != self.d:
            raise DataError("graph contains a cycle")
        return out

    def descendants(self) -> np.ndarray:
        """Boolean reachability matrix R with R[i, j] = True iff a directed path i -> ... -> j exists."""
        reach = self.adjacency.copy()
        for _ in range(self.d):
            new = reach | (reach @ self.adjacency)
            if np.array_equal(new, reach):
                break
            reach = new
        return reach

    # -- constructors --------------------------------------------------------

    @classmethod
    def empty(cls, labels) -> "CausalGraph":
        labels = tuple(labels)
        return cls(labels, np.zeros((len(labels), len(labels)), dtype=bool))

    @classmethod
    def from_edges(cls, labels, edges) -> "CausalGraph":
        """Build from (u, v) pairs given as label pairs or index pairs."""
        g = cls.empty(labels)
        adj = g.adjacency.copy()
        for u, v in edges:
            ui = g.index_of(u) if isinstance(u, str) else int(u)
            vi = g.index_of(v) if isinstance(v, str) else int(v)
            adj[ui, vi] = True
        return cls(g.labels, adj)

    def subgraph(self, labels) -> "CausalGraph":
        """Induced subgraph on the given labels (kept in the given order)."""
        idx = [self.index_of(l) for l in labels]
        return CausalGraph(tuple(labels), self.adjacency[np.ix_(idx, idx)])

    def __eq__(self, other):
        return (
            isinstance(other, CausalGraph)
            and self.labels == other.labels
            and np.array_equal(self.adjacency, other.adjacency)
        )


# -- exports -----------------------------------------------------------------


def _export_edge_order(graph: CausalGraph) -> list[tuple[str, str]]:
    """Edges sorted by the source's topological position, then target label."""
    topo = graph.topological_order()
    pos = {i: p for p, i in enumerate(topo)}
    return [
        (graph.labels[u], graph.labels[v])
        for u, v in sorted(graph.edges(), key=lambda e: (pos[e[0]], graph.labels[e[1]]))
    ]


def graph_to_edgelist(graph: CausalGraph) -> str:
    """CSV text ``from,to`` with one row per edge, byte-stable ordering."""
    lines = ["from,to"]
    lines += [f"{u},{v}" for u, v in _export_edge_order(graph)]
    return "\n".join(lines) + "\n"


def graph_to_dot(graph: CausalGraph) -> str:
    """DOT digraph text: one node statement per label, one edge statement per edge."""
    topo = graph.topological_order()
    lines = ["digraph g {"]
    lines += [f'  "{graph.labels[i]}";' for i in topo]
    lines += [f'  "{u}" -> "{v}";' for u, v in _export_edge_order(graph)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(graph: CausalGraph, format: str, path) -> None:
    """Write the graph to ``path`` as ``edgelist`` CSV or ``dot`` text."""
    if format == "edgelist":
        text = graph_to_edgelist(graph)
    elif format == "dot":
        text = graph_to_dot(graph)
    else:
        raise ConfigError(f"unknown graph export format {format!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write graph export to {path}: {exc}") from exc
