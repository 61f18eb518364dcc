"""Seeded random-graph generators used by the experiments."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .graph import Graph, GraphError, build_graph


def _from_pairs(n: int, rows: np.ndarray, cols: np.ndarray) -> Graph:
    ones = np.ones(rows.shape[0])
    return Graph(n, rows.astype(np.int64), cols.astype(np.int64), ones)


def er_probability(n: int, mean_degree: float) -> float:
    """Edge probability giving expected mean degree ``mean_degree`` on ``n`` nodes."""
    return min(1.0, mean_degree / (n - 1))


def gen_er(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); edges come out sorted by ``(u, v)``."""
    if n < 2:
        raise GraphError(f"ER graph needs n >= 2, got {n}")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.shape[0]) < p
    return _from_pairs(n, rows[keep], cols[keep])


def gen_ba(n: int, m_attach: int, seed: int) -> Graph:
    """Barabasi-Albert preferential attachment grown from a clique on ``m_attach`` nodes.

    Every new node links to ``m_attach`` distinct existing nodes chosen with
    probability proportional to degree (uniformly while all degrees are 0).
    """
    if not 1 <= m_attach < n:
        raise GraphError(f"need 1 <= m_attach < n, got m_attach={m_attach}, n={n}")
    rng = np.random.default_rng(seed)
    deg = np.zeros(n)
    edges = [(i, j) for i in range(m_attach) for j in range(i + 1, m_attach)]
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    for new in range(m_attach, n):
        weights = deg[:new]
        total = weights.sum()
        p = weights / total if total > 0 else None
        targets = rng.choice(new, size=m_attach, replace=False, p=p)
        for t in targets:
            edges.append((int(t), new))
            deg[t] += 1
        deg[new] += m_attach
    edges.sort()
    return build_graph(n, edges)


def gen_sbm(block_sizes: Sequence[int], p_in: float, p_out: float, seed: int) -> Graph:
    """Stochastic block model: pair probability ``p_in`` within a block, ``p_out`` across."""
    for p in (p_in, p_out):
        if not 0.0 <= p <= 1.0:
            raise GraphError(f"probabilities must lie in [0, 1], got {p}")
    sizes = [int(s) for s in block_sizes]
    if not sizes or min(sizes) < 1:
        raise GraphError(f"block sizes must be positive, got {block_sizes}")
    n = sum(sizes)
    if n < 2:
        raise GraphError("SBM needs at least two nodes")
    block = np.repeat(np.arange(len(sizes)), sizes)
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    prob = np.where(block[rows] == block[cols], p_in, p_out)
    keep = rng.random(rows.shape[0]) < prob
    return _from_pairs(n, rows[keep], cols[keep])


def gen_knn_circle(n: int, k: int) -> Graph:
    """Ring lattice: every node joined to its ``k/2`` nearest neighbours on each side."""
    if k % 2:
        raise GraphError(f"k must be even, got {k}")
    if not 0 < k < n:
        raise GraphError(f"need 0 < k < n, got k={k}, n={n}")
    pairs = set()
    for i in range(n):
        for step in range(1, k // 2 + 1):
            j = (i + step) % n
            pairs.add((min(i, j), max(i, j)))
    return build_graph(n, sorted(pairs))
