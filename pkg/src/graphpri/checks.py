"""Fast invariant checks behind ``graphpri verify``.

Every check takes a seeded generator and returns ``(ok, detail)``. Functions
are looked up through their modules at call time, so a patched
implementation is what gets checked.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import _kernels, baselines, graph, measures, optimizer
from .generators import er_probability, gen_er


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random real density matrix; ``rank`` < n gives a singular one."""
    x = rng.standard_normal((n, rank or n))
    d = x @ x.T
    return d / np.trace(d)


def random_connected_graph(n: int, rng: np.random.Generator, mean_degree: float = 4.0, weighted: bool = False):
    """ER graph plus a random spanning path so it is connected."""
    g = gen_er(n, er_probability(n, min(mean_degree, n - 1)), int(rng.integers(2**32)))
    perm = rng.permutation(n)
    edges = {(u, v): w for u, v, w in g.edges}
    for a, b in zip(perm[:-1], perm[1:]):
        edges.setdefault((min(a, b), max(a, b)), 1.0)
    items = sorted(edges)
    weights = rng.uniform(0.5, 2.0, len(items)) if weighted else np.ones(len(items))
    return graph.build_graph(n, [(int(u), int(v), float(w)) for (u, v), w in zip(items, weights)])


def check_incidence_oracle(rng, count: int = 10, max_nodes: int = 50):
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(3, max_nodes + 1))
        g = gen_er(n, float(rng.uniform(0.1, 0.6)), int(rng.integers(2**32)))
        if g.edge_count == 0:
            continue
        w = rng.integers(0, 2, g.edge_count).astype(np.float64)
        lhs = graph.subgraph_laplacian(graph.incidence_matrix(g), w)
        rhs = g.subgraph(w).adjacency()
        rhs = np.diag(rhs.sum(axis=1)) - rhs
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst <= 1e-12, f"max entry error {worst:.2e}"


def check_entropy_bounds(rng, count: int = 100):
    worst_kn = max(
        abs(measures.graph_entropy(gen_er(n, 1.0, 0)) - math.log(n - 1)) for n in range(3, 21)
    )
    single = measures.graph_entropy(graph.build_graph(2, [(0, 1)]))
    bad = 0
    for _ in range(count):
        n = int(rng.integers(2, 12))
        s = measures.von_neumann_entropy(random_density(n, rng, int(rng.integers(1, n + 1))))
        bad += not (-1e-12 <= s <= math.log(n) + 1e-12)
    ok = worst_kn <= 1e-9 and abs(single) <= 1e-12 and bad == 0
    return ok, f"K_n error {worst_kn:.2e}, single edge {single:.1e}, bound violations {bad}"


def check_divergence_axioms(rng, count: int = 100):
    worst_sym = worst_tri = 0.0
    bad = 0
    qjs = measures.qjs_divergence
    for _ in range(count):
        n = int(rng.integers(2, 10))
        a, b, c = (random_density(n, rng, int(rng.integers(1, n + 1))) for _ in range(3))
        ab, ba, bc, ac = qjs(a, b), qjs(b, a), qjs(b, c), qjs(a, c)
        worst_sym = max(worst_sym, abs(ab - ba))
        bad += not (-1e-12 <= ab <= math.log(2) + 1e-12) or abs(qjs(a, a)) > 1e-12
        root = lambda v: math.sqrt(max(v, 0.0))
        worst_tri = max(worst_tri, root(ac) - root(ab) - root(bc))
    ok = worst_sym <= 1e-12 and worst_tri <= 1e-8 and bad == 0
    return ok, f"asymmetry {worst_sym:.2e}, triangle excess {worst_tri:.2e}, range violations {bad}"


def _objective(b, w, beta):
    return measures.pri_objective(
        graph.trace_normalize(graph.subgraph_laplacian(b, w)),
        graph.trace_normalize(graph.subgraph_laplacian(b, np.ones_like(w))),
        beta,
    )


def gradient_errors(rng, count: int = 10, n: int = 10, h: float = 1e-6):
    """Worst relative tangent-direction error and worst radial derivative of the exact gradient."""
    worst_rel = worst_rad = 0.0
    done = 0
    while done < count:
        g = random_connected_graph(n, rng, weighted=bool(rng.integers(2)))
        b = graph.incidence_matrix(g)
        w = rng.uniform(0.1, 0.9, g.edge_count)
        beta = float(rng.uniform(0.0, 5.0))
        grad = optimizer.analytical_gradient(b, w, beta)
        d = rng.standard_normal(g.edge_count)
        d -= w * (d @ w) / (w @ w)  # tangent to the scale orbit through w
        d /= np.linalg.norm(d)
        step = min(h, 0.5 * float(np.min(np.minimum(w, 1 - w) / np.maximum(np.abs(d), 1e-300))))
        fd = (_objective(b, w + step * d, beta) - _objective(b, w - step * d, beta)) / (2 * step)
        an = float(grad @ d)
        worst_rel = max(worst_rel, abs(an - fd) / max(abs(fd), 1e-3))
        worst_rad = max(worst_rad, abs(float(grad @ w)))
        done += 1
    return worst_rel, worst_rad


def check_gradient(rng, count: int = 10):
    rel, rad = gradient_errors(rng, count)
    return rel <= 1e-4 and rad <= 1e-8, f"relative error {rel:.2e}, radial derivative {rad:.2e}"


def check_foster(rng, count: int = 10):
    worst = 0.0
    for _ in range(count):
        g = random_connected_graph(int(rng.integers(5, 40)), rng, weighted=bool(rng.integers(2)))
        total = float(np.dot(g.weight, baselines.effective_resistances(g)))
        worst = max(worst, abs(total - (g.node_count - 1)))
    return worst <= 1e-8, f"max deviation {worst:.2e}"


def check_kernels(rng, count: int = 5):
    worst = 0.0
    for _ in range(count):
        g = random_connected_graph(int(rng.integers(5, 40)), rng, weighted=True)
        args = (g.node_count, g.head, g.tail, g.weight)
        lap = _kernels.laplacian_numpy(*args)
        worst = max(worst, float(np.abs(lap - _kernels.laplacian_numba(*args)).max()))
        worst = max(worst, float(np.abs(_kernels.degrees_numpy(*args) - _kernels.degrees_numba(*args)).max()))
        mat = rng.standard_normal((g.node_count, g.node_count))
        mat = mat + mat.T
        qa = _kernels.edge_quadratic_forms_numpy(mat, g.head, g.tail, g.weight)
        qb = _kernels.edge_quadratic_forms_numba(mat, g.head, g.tail, g.weight)
        worst = max(worst, float(np.abs(qa - qb).max()))
        lam = np.abs(rng.standard_normal(g.node_count))
        lam /= lam.sum()
        worst = max(
            worst,
            abs(_kernels.entropy_from_eigenvalues_numpy(lam, 1e-12) - _kernels.entropy_from_eigenvalues_numba(lam, 1e-12)),
        )
    return worst <= 1e-10, f"max numpy/numba difference {worst:.2e}"


PROPERTIES: dict[str, Callable] = {
    "incidence-oracle": check_incidence_oracle,
    "entropy-bounds": check_entropy_bounds,
    "divergence-axioms": check_divergence_axioms,
    "gradient": check_gradient,
    "foster-sum": check_foster,
    "kernel-agreement": check_kernels,
}


def run_all(seed: int = 0) -> list[tuple[str, bool, str]]:
    out = []
    for i, (name, fn) in enumerate(PROPERTIES.items()):
        try:
            ok, detail = fn(np.random.default_rng([seed, i]))
        except Exception as exc:  # a crash is a failed property
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
