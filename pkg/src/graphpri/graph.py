"""Undirected weighted graphs and the incidence/Laplacian algebra.

Every edge ``m`` is stored with ``head < tail``; the incidence column of edge
``m`` is ``+sqrt(mu_m)`` at the head and ``-sqrt(mu_m)`` at the tail, so that
``B @ B.T`` is the weighted Laplacian and ``B @ diag(w) @ B.T`` is the
Laplacian of the subgraph selected by ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels


class GraphError(ValueError):
    """Invalid graph construction or incompatible graph arguments."""


class EmptyGraphError(GraphError):
    """Raised where a quantity is undefined for a graph without edges."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Graph:
    """Immutable undirected weighted graph on nodes ``0..node_count-1``.

    The position of an edge in :attr:`edges` is its canonical index; every
    edge-selection vector is aligned with it.
    """

    __slots__ = ("node_count", "head", "tail", "weight")

    def __init__(self, node_count: int, head: np.ndarray, tail: np.ndarray, weight: np.ndarray):
        # use build_graph() for validated construction
        self.node_count = int(node_count)
        self.head = _readonly(np.asarray(head, dtype=np.int64).copy())
        self.tail = _readonly(np.asarray(tail, dtype=np.int64).copy())
        self.weight = _readonly(np.asarray(weight, dtype=np.float64).copy())

    @property
    def edge_count(self) -> int:
        return int(self.head.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(u), int(v), float(w)) for u, v, w in zip(self.head, self.tail, self.weight)]

    @property
    def is_weighted(self) -> bool:
        return bool(np.any(self.weight != 1.0))

    def __len__(self) -> int:
        return self.edge_count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and np.array_equal(self.head, other.head)
            and np.array_equal(self.tail, other.tail)
            and np.array_equal(self.weight, other.weight)
        )

    def __hash__(self) -> int:
        return hash((self.node_count, self.head.tobytes(), self.tail.tobytes(), self.weight.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(node_count={self.node_count}, edge_count={self.edge_count})"

    def subgraph(self, mask) -> "Graph":
        """Graph on the same nodes keeping the edges where ``mask`` is nonzero."""
        keep = np.asarray(mask) != 0
        if keep.shape != (self.edge_count,):
            raise GraphError(f"mask length {keep.shape} does not match edge count {self.edge_count}")
        return Graph(self.node_count, self.head[keep], self.tail[keep], self.weight[keep])

    def with_edge(self, u: int, v: int, weight: float = 1.0) -> "Graph":
        """Copy of the graph with one extra edge appended."""
        return build_graph(self.node_count, self.edges + [(u, v, weight)])

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.node_count, self.node_count))
        a[self.head, self.tail] = self.weight
        a[self.tail, self.head] = self.weight
        return a

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.head.tolist(), self.tail.tolist()))


def build_graph(node_count: int, edge_list: Iterable[Sequence]) -> Graph:
    """Validate an edge list and build a :class:`Graph`.

    Each entry is ``(u, v)`` or ``(u, v, weight)``. Edge order is kept as
    given; endpoints are reordered so that ``u < v``.
    """
    n = int(node_count)
    if n < 1:
        raise GraphError(f"node_count must be positive, got {node_count}")
    heads, tails, weights = [], [], []
    seen: set[tuple[int, int]] = set()
    for idx, item in enumerate(edge_list):
        if len(item) == 2:
            u, v = item
            w = 1.0
        elif len(item) == 3:
            u, v, w = item
        else:
            raise GraphError(f"edge {idx}: expected (u, v) or (u, v, weight), got {item!r}")
        if int(u) != u or int(v) != v:
            raise GraphError(f"edge {idx}: node indices must be integers, got ({u}, {v})")
        u, v, w = int(u), int(v), float(w)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge {idx}: node index out of range [0, {n}) in ({u}, {v})")
        if u == v:
            raise GraphError(f"edge {idx}: self-loop on node {u}")
        if not (w > 0 and np.isfinite(w)):
            raise GraphError(f"edge {idx}: weight must be positive and finite, got {w}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"edge {idx}: duplicate edge {key}")
        seen.add(key)
        heads.append(key[0])
        tails.append(key[1])
        weights.append(w)
    return Graph(n, np.array(heads, dtype=np.int64), np.array(tails, dtype=np.int64), np.array(weights))


@dataclass(frozen=True)
class IncidenceMatrix:
    """Signed square-root-weight incidence matrix ``B`` (N x M)."""

    values: np.ndarray
    head: np.ndarray
    tail: np.ndarray
    weight: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def incidence_matrix(g: Graph) -> IncidenceMatrix:
    """Incidence matrix with the smaller endpoint of every edge as head."""
    b = np.zeros((g.node_count, g.edge_count))
    cols = np.arange(g.edge_count)
    root = np.sqrt(g.weight)
    b[g.head, cols] = root
    b[g.tail, cols] = -root
    return IncidenceMatrix(_readonly(b), g.head, g.tail, g.weight)


def laplacian(g: Graph, w=None) -> np.ndarray:
    """Weighted Laplacian of ``g``, or of the subgraph selected by ``w``.

    Assembled directly from the edge list, which is equivalent to
    ``B diag(w) B^T`` without the O(N^2 M) product.
    """
    weight = g.weight if w is None else g.weight * _check_selection(w, g.edge_count)
    return _kernels.laplacian(g.node_count, g.head, g.tail, weight)


def subgraph_laplacian(b: IncidenceMatrix, w) -> np.ndarray:
    """``B diag(w) B^T`` evaluated literally from the incidence matrix."""
    w = _check_selection(w, b.shape[1])
    return (b.values * w) @ b.values.T


def degrees(g: Graph, w=None) -> np.ndarray:
    """Weighted degrees ``d_i = sum_j W_ij`` (optionally of a selected subgraph)."""
    weight = g.weight if w is None else g.weight * _check_selection(w, g.edge_count)
    return _kernels.degrees(g.node_count, g.head, g.tail, weight)


def trace_normalize(m: np.ndarray) -> np.ndarray:
    """Divide a symmetric PSD matrix by its trace, giving a density matrix."""
    m = np.asarray(m, dtype=np.float64)
    tr = float(np.trace(m))
    if not tr > 0:
        raise EmptyGraphError(f"cannot trace-normalize a matrix with trace {tr} (empty subgraph?)")
    return m / tr


def connected_components(g: Graph) -> np.ndarray:
    """Component label per node (labels are 0.. in order of first node)."""
    parent = np.arange(g.node_count)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in zip(g.head.tolist(), g.tail.tolist()):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    roots = np.array([find(i) for i in range(g.node_count)])
    _, labels = np.unique(roots, return_inverse=True)
    return labels


def component_count(g: Graph) -> int:
    return int(connected_components(g).max()) + 1


def is_connected(g: Graph) -> bool:
    return component_count(g) == 1


def _check_selection(w, m: int) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (m,):
        raise GraphError(f"edge selection has shape {w.shape}, expected ({m},)")
    return w
