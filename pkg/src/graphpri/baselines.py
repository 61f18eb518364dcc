"""Comparison sparsifiers: random, local degree, local similarity, effective resistance.

All return a hard 0/1 mask aligned with the input graph's edge order and never
re-weight the retained edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, GraphError, connected_components, is_connected, laplacian

METHODS = ("random", "local_degree", "local_similarity", "effective_resistance")


def target_count(m: int, ratio: float) -> int:
    """``ceil(ratio * m)``, tolerant of float noise in ``ratio * m``."""
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"ratio must lie in (0, 1], got {ratio}")
    return min(m, math.ceil(ratio * m - 1e-9))


def _mask(m: int, keep) -> np.ndarray:
    out = np.zeros(m, dtype=np.int64)
    out[np.asarray(keep, dtype=np.int64)] = 1
    return out


def random_sparsifier(g: Graph, ratio: float, seed: int) -> np.ndarray:
    """Keep a uniform sample of ``ceil(ratio * M)`` edges."""
    k = target_count(g.edge_count, ratio)
    rng = np.random.default_rng(seed)
    return _mask(g.edge_count, rng.choice(g.edge_count, size=k, replace=False))


def _incident_edges(g: Graph) -> list[list[int]]:
    inc: list[list[int]] = [[] for _ in range(g.node_count)]
    for m, (u, v) in enumerate(zip(g.head.tolist(), g.tail.tolist())):
        inc[u].append(m)
        inc[v].append(m)
    return inc


def local_degree(g: Graph, exponent: float) -> np.ndarray:
    """Every node keeps the edges to its ``floor(deg ** exponent)`` highest-degree neighbours.

    Degrees are unweighted neighbour counts; neighbour ties go to the lower
    node index. The result is the union over nodes.
    """
    if not 0.0 <= exponent <= 1.0:
        raise ValueError(f"exponent must lie in [0, 1], got {exponent}")
    deg = np.bincount(np.concatenate([g.head, g.tail]), minlength=g.node_count)
    keep = np.zeros(g.edge_count, dtype=np.int64)
    for v, edges in enumerate(_incident_edges(g)):
        if not edges:
            continue
        quota = math.floor(len(edges) ** exponent + 1e-12)
        other = [int(g.tail[m]) if g.head[m] == v else int(g.head[m]) for m in edges]
        order = sorted(range(len(edges)), key=lambda i: (-deg[other[i]], other[i]))
        for i in order[:quota]:
            keep[edges[i]] = 1
    return keep


def jaccard_scores(g: Graph) -> np.ndarray:
    """Jaccard similarity of the closed neighbourhoods of every edge's endpoints."""
    a = np.zeros((g.node_count, g.node_count))
    a[g.head, g.tail] = 1.0
    a[g.tail, g.head] = 1.0
    a += np.eye(g.node_count)
    size = a.sum(axis=1)
    inter = np.einsum("mi,mi->m", a[g.head], a[g.tail])
    return inter / (size[g.head] + size[g.tail] - inter)


def local_similarity(g: Graph, ratio: float) -> np.ndarray:
    """Keep ``ceil(ratio * M)`` edges by per-node Jaccard rank.

    Each node ranks its edges by score (descending, ties to lower edge
    index). An edge's key is its best relative rank ``(position + 1) / deg``
    over its two endpoints, so cutting the keys at ``f`` is the union of
    every node keeping its top fraction ``f``. The cut is placed to give
    exactly the requested count, ties again to the lower edge index.
    """
    k = target_count(g.edge_count, ratio)
    score = jaccard_scores(g)
    key = np.full(g.edge_count, np.inf)
    for edges in _incident_edges(g):
        order = sorted(edges, key=lambda m: (-score[m], m))
        for pos, m in enumerate(order):
            key[m] = min(key[m], (pos + 1) / len(order))
    chosen = np.lexsort((np.arange(g.edge_count), key))[:k]
    return _mask(g.edge_count, chosen)


def effective_resistances(g: Graph) -> np.ndarray:
    """Effective resistance between the endpoints of every edge.

    Uses the Laplacian pseudoinverse. On a disconnected graph the
    pseudoinverse is block diagonal, so each edge sees only its own
    component.
    """
    lpinv = np.linalg.pinv(laplacian(g), hermitian=True)
    return _kernels.edge_quadratic_forms(lpinv, g.head, g.tail, np.ones(g.edge_count))


def effective_resistance_sparsifier(g: Graph, ratio: float, seed: int) -> np.ndarray:
    """Sample ``ceil(ratio * M)`` distinct edges with probability proportional to ``mu * R``.

    Sampling is successive (renormalized after each draw), implemented with
    Gumbel top-k keys, which has the same distribution.
    """
    if not is_connected(g):
        raise GraphError(f"effective-resistance sampling needs a connected graph ({connected_components(g).max() + 1} components)")
    k = target_count(g.edge_count, ratio)
    p = g.weight * effective_resistances(g)
    rng = np.random.default_rng(seed)
    keys = np.log(p) - np.log(-np.log(rng.random(g.edge_count)))
    chosen = np.lexsort((np.arange(g.edge_count), -keys))[:k]
    return _mask(g.edge_count, chosen)


@dataclass(frozen=True)
class SparsifierSpec:
    """A baseline method with its parameter.

    ``target_ratio`` is the kept fraction for random / local_similarity /
    effective_resistance and the degree exponent for local_degree.
    """

    method: str
    target_ratio: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.method == "local_degree":
            if not 0.0 <= self.target_ratio <= 1.0:
                raise ValueError(f"local_degree exponent must lie in [0, 1], got {self.target_ratio}")
        elif not 0.0 < self.target_ratio <= 1.0:
            raise ValueError(f"target_ratio must lie in (0, 1], got {self.target_ratio}")


def sparsify_baseline(g: Graph, spec: SparsifierSpec) -> np.ndarray:
    if spec.method == "random":
        return random_sparsifier(g, spec.target_ratio, spec.seed)
    if spec.method == "local_degree":
        return local_degree(g, spec.target_ratio)
    if spec.method == "local_similarity":
        return local_similarity(g, spec.target_ratio)
    return effective_resistance_sparsifier(g, spec.target_ratio, spec.seed)
