"""Von Neumann entropy, quantum Jensen-Shannon divergence and the PRI objective.

All entropies are in nats. Density matrices are plain symmetric ndarrays with
unit trace, usually produced by :func:`graphpri.graph.trace_normalize`.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .graph import EmptyGraphError, Graph, GraphError, degrees, laplacian, trace_normalize

#: eigenvalues at or below this are treated as exact zeros (0 ln 0 = 0)
EIGEN_FLOOR = 1e-12


def spectrum(d: np.ndarray) -> np.ndarray:
    """Eigenvalues of a density matrix in nonincreasing order.

    Round-off negatives (down to -1e-10) are clamped to zero; anything more
    negative means the input was not positive semi-definite.
    """
    lam = np.linalg.eigvalsh(d)[::-1]
    if lam[-1] < -1e-10:
        raise ValueError(f"matrix is not positive semi-definite (min eigenvalue {lam[-1]:.3e})")
    return np.clip(lam, 0.0, None)


def entropy_of_spectrum(lam) -> float:
    return _kernels.entropy_from_eigenvalues(np.asarray(lam, dtype=np.float64), EIGEN_FLOOR)


def von_neumann_entropy(d: np.ndarray) -> float:
    """``-tr(d ln d)`` of a density matrix."""
    return _kernels.entropy_from_eigenvalues(np.linalg.eigvalsh(d), EIGEN_FLOOR)


def graph_entropy(g: Graph, w=None) -> float:
    """Von Neumann entropy of the trace-normalized Laplacian of ``g`` (or a subgraph)."""
    return von_neumann_entropy(trace_normalize(laplacian(g, w)))


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise GraphError(f"density matrices differ in shape: {a.shape} vs {b.shape}")


def qjs_divergence(a: np.ndarray, b: np.ndarray) -> float:
    """Quantum Jensen-Shannon divergence ``S((a+b)/2) - S(a)/2 - S(b)/2``."""
    _check_pair(a, b)
    return von_neumann_entropy(0.5 * (a + b)) - 0.5 * von_neumann_entropy(a) - 0.5 * von_neumann_entropy(b)


def pri_objective(sigma: np.ndarray, rho: np.ndarray, beta: float) -> float:
    """``(1 - beta) S(sigma) + 2 beta S((sigma + rho)/2)``.

    This is ``S(sigma) + beta * 2 * QJS(sigma, rho)`` with the constant
    ``-beta S(rho)`` dropped.
    """
    _check_pair(sigma, rho)
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    value = (1.0 - beta) * von_neumann_entropy(sigma)
    if beta:
        value += 2.0 * beta * von_neumann_entropy(0.5 * (sigma + rho))
    return value


def degree_entropy(deg) -> float:
    """Shannon entropy of a degree vector normalized to a distribution."""
    deg = np.asarray(deg, dtype=np.float64)
    total = deg.sum()
    if not total > 0:
        raise EmptyGraphError("degree-sum is zero")
    p = deg[deg > 0] / total
    return float(-np.sum(p * np.log(p)))


def shannon_degree_entropy(g: Graph) -> float:
    """O(N) surrogate for the von Neumann entropy: entropy of ``d_i / sum(d)``."""
    if g.edge_count == 0:
        raise EmptyGraphError("graph has no edges")
    return degree_entropy(degrees(g))


def entropy_gap_bound(g: Graph) -> tuple[float, float]:
    """Gap between degree entropy and von Neumann entropy, with its upper bound.

    Returns ``(H(G) - S_vN, tr(W^2) / (delta * d_G))`` where ``delta`` is the
    minimum positive degree and ``d_G`` the degree-sum. Both are in nats, so
    the ``log2(e)`` factor of the base-2 bound cancels.
    """
    if g.edge_count == 0:
        raise EmptyGraphError("graph has no edges")
    deg = degrees(g)
    gap = degree_entropy(deg) - graph_entropy(g)
    # tr(W^2) = sum_ij W_ij^2 = 2 sum_m mu_m^2
    tr_w2 = 2.0 * float(np.sum(g.weight**2))
    delta = float(deg[deg > 0].min())
    bound = tr_w2 / (delta * deg.sum())
    return gap, bound
