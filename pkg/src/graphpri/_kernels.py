"""Edge-list inner loops, compiled with numba when available.

Set ``GRAPHPRI_DISABLE_NUMBA=1`` to force the pure-numpy implementations.
Both paths return identical results (up to float summation order) and are
checked against each other in the test suite.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

HAVE_NUMBA = njit is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("GRAPHPRI_DISABLE_NUMBA", "0") not in ("1", "true", "yes")


# --------------------------------------------------------------------------
# pure numpy
# --------------------------------------------------------------------------


def laplacian_numpy(n, head, tail, weight):
    lap = np.zeros((n, n))
    np.add.at(lap, (head, head), weight)
    np.add.at(lap, (tail, tail), weight)
    np.add.at(lap, (head, tail), -weight)
    np.add.at(lap, (tail, head), -weight)
    return lap


def degrees_numpy(n, head, tail, weight):
    deg = np.zeros(n)
    np.add.at(deg, head, weight)
    np.add.at(deg, tail, weight)
    return deg


def edge_quadratic_forms_numpy(mat, head, tail, weight):
    # b_m^T K b_m for b_m = sqrt(mu_m) (e_head - e_tail)
    return weight * (mat[head, head] + mat[tail, tail] - 2.0 * mat[head, tail])


def entropy_from_eigenvalues_numpy(lam, threshold):
    pos = lam[lam > threshold]
    return float(-np.sum(pos * np.log(pos)))


# --------------------------------------------------------------------------
# numba
# --------------------------------------------------------------------------

if njit is not None:

    @njit(cache=True)
    def laplacian_numba(n, head, tail, weight):
        lap = np.zeros((n, n))
        for m in range(head.shape[0]):
            u = head[m]
            v = tail[m]
            mu = weight[m]
            lap[u, u] += mu
            lap[v, v] += mu
            lap[u, v] -= mu
            lap[v, u] -= mu
        return lap

    @njit(cache=True)
    def degrees_numba(n, head, tail, weight):
        deg = np.zeros(n)
        for m in range(head.shape[0]):
            deg[head[m]] += weight[m]
            deg[tail[m]] += weight[m]
        return deg

    @njit(cache=True)
    def edge_quadratic_forms_numba(mat, head, tail, weight):
        out = np.empty(head.shape[0])
        for m in range(head.shape[0]):
            u = head[m]
            v = tail[m]
            out[m] = weight[m] * (mat[u, u] + mat[v, v] - 2.0 * mat[u, v])
        return out

    @njit(cache=True)
    def entropy_from_eigenvalues_numba(lam, threshold):
        total = 0.0
        for x in lam:
            if x > threshold:
                total -= x * np.log(x)
        return total


if USE_NUMBA:
    _laplacian = laplacian_numba
    _degrees = degrees_numba
    _edge_quadratic_forms = edge_quadratic_forms_numba
    _entropy = entropy_from_eigenvalues_numba
else:
    _laplacian = laplacian_numpy
    _degrees = degrees_numpy
    _edge_quadratic_forms = edge_quadratic_forms_numpy
    _entropy = entropy_from_eigenvalues_numpy


def laplacian(n, head, tail, weight):
    """Dense weighted Laplacian ``D - W`` assembled from an edge list."""
    return _laplacian(int(n), head, tail, np.ascontiguousarray(weight, dtype=np.float64))


def degrees(n, head, tail, weight):
    """Weighted node degrees from an edge list."""
    return _degrees(int(n), head, tail, np.ascontiguousarray(weight, dtype=np.float64))


def edge_quadratic_forms(mat, head, tail, weight):
    """``b_m^T mat b_m`` for every incidence column, without forming ``B``."""
    return _edge_quadratic_forms(
        np.ascontiguousarray(mat, dtype=np.float64), head, tail, np.ascontiguousarray(weight, dtype=np.float64)
    )


def entropy_from_eigenvalues(lam, threshold=1e-12):
    """``-sum(l * ln l)`` over eigenvalues above ``threshold`` (0 ln 0 = 0)."""
    return float(_entropy(np.ascontiguousarray(lam, dtype=np.float64), threshold))
