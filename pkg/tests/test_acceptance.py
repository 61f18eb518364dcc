"""Acceptance criteria 1-12, each at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line, repeated in pytest's terminal
summary. Run the file directly for just the summary::

    python3 tests/test_acceptance.py

Criterion 10 reads the real-world graphs G4-G6 from ``$GRAPHPRI_DATA_DIR``
when set (``<stem>.edgelist`` or KONECT ``out.<name>`` files).
"""

import math
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np
import pytest

from graphpri import (
    PriConfig,
    build_graph,
    centralization,
    incidence_matrix,
    laplacian,
    load_karate,
    qjs_divergence,
    sparsify_pri,
    subgraph_laplacian,
    von_neumann_entropy,
)
from graphpri import cli
from graphpri.baselines import effective_resistances
from graphpri.checks import gradient_errors, random_connected_graph, random_density
from graphpri.evaluation import (
    assumption_check,
    beta_sparsity_curve,
    comparison_wins,
    derive_seed,
    monotone_violation,
    sparsifier_comparison,
    spearman,
    tradeoff_curve,
)
from graphpri.generators import er_probability, gen_ba, gen_er
from graphpri.io import benchmark_graphs, write_edge_list
from graphpri.measures import entropy_gap_bound, graph_entropy

#: reduced optimizer budget for the multi-run harness criteria (8 and 10)
HARNESS_CFG = PriConfig(max_iterations=150, samples=1, step_size=0.05, alpha=0.005)
REFERENCE_PCT = {1.6: 95.65, 2.5: 88.57, 3.0: 88.82, 4.0: 88.13, 5.0: 87.25}
BETA_GRID = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0]


#: lines collected for the terminal summary (see conftest.py)
RESULTS: list[str] = []


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}"
    RESULTS.append(line)
    print(line, flush=True)
    return ok


def dense_laplacian(n, edges):
    lap = np.zeros((n, n))
    for u, v, w in edges:
        lap[u, v] -= w
        lap[v, u] -= w
        lap[u, u] += w
        lap[v, v] += w
    return lap


# --------------------------------------------------------------------------


def criterion_1():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 51))
        g = gen_er(n, float(rng.uniform(0.05, 0.6)), int(rng.integers(2**32)))
        w = rng.integers(0, 2, g.edge_count).astype(np.float64)
        kept = [e for e, keep in zip(g.edges, w) if keep]
        diff = subgraph_laplacian(incidence_matrix(g), w) - dense_laplacian(n, kept)
        worst = max(worst, float(np.abs(diff).max()) if diff.size else 0.0)
    elapsed = time.perf_counter() - start
    return worst <= 1e-12 and elapsed < 5, f"max |B diag(w) B' - L_rebuilt| = {worst:.1e}, {elapsed:.2f} s (< 5 s)"


def criterion_2():
    kn = max(abs(graph_entropy(gen_er(n, 1.0, 0)) - math.log(n - 1)) for n in range(3, 21))
    single = graph_entropy(build_graph(2, [(0, 1)]))
    rng = np.random.default_rng(2)
    bad = 0
    for _ in range(1000):
        n = int(rng.integers(1, 16))
        s = von_neumann_entropy(random_density(n, rng, int(rng.integers(1, n + 1))))
        bad += not (-1e-12 <= s <= math.log(n) + 1e-12)
    ok = kn <= 1e-9 and abs(single) <= 1e-12 and bad == 0
    return ok, f"K_n error {kn:.1e}; single edge S = {single:.1e}; 0 <= S <= ln N violations {bad}/1000"


def criterion_3():
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    neg = sym = big = tri = nonzero_self = 0
    for _ in range(1000):
        n = int(rng.integers(2, 10))
        a, b, c = (random_density(n, rng, int(rng.integers(1, n + 1))) for _ in range(3))
        ab, ba = qjs_divergence(a, b), qjs_divergence(b, a)
        neg += ab < -1e-12
        big += ab > math.log(2) + 1e-12
        sym += abs(ab - ba) > 1e-12
        nonzero_self += abs(qjs_divergence(a, a)) > 1e-12
        # distinct inputs must give a strictly positive divergence
        nonzero_self += np.linalg.norm(a - b) > 1e-8 and ab <= 0
        r = lambda v: math.sqrt(max(v, 0.0))
        tri += r(qjs_divergence(a, c)) > r(ab) + r(qjs_divergence(b, c)) + 1e-8
    elapsed = time.perf_counter() - start
    ok = neg == sym == big == tri == nonzero_self == 0 and elapsed < 30
    return ok, (
        f"violations: negative {neg}, asymmetric {sym}, > ln2 {big}, zero-iff-equal {nonzero_self}, "
        f"triangle {tri} (of 1000); {elapsed:.1f} s (< 30 s)"
    )


def criterion_4():
    rel, rad = gradient_errors(np.random.default_rng(4), count=50, n=10, h=1e-6)
    return rel <= 1e-4 and rad < 1e-8, f"worst tangent relative error {rel:.1e} (<= 1e-4), worst radial |.| {rad:.1e} (< 1e-8)"


def criterion_5():
    rng = np.random.default_rng(5)
    bad = 0
    for _ in range(100):
        g = random_connected_graph(int(rng.integers(3, 40)), rng, mean_degree=float(rng.uniform(2, 10)), weighted=True)
        gap, bound = entropy_gap_bound(g)
        bad += not (-1e-12 <= gap <= bound + 1e-12)
    # "almost all unweighted graphs": uniform random graphs, G(n, 1/2)
    means = []
    for n in (20, 50, 100, 200):
        rel = []
        for r in range(10):
            g = gen_er(n, 0.5, derive_seed(5, n, r))
            gap, _ = entropy_gap_bound(g)
            rel.append(gap / graph_entropy(g))
        means.append(float(np.mean(rel)))
    trend = all(a > b for a, b in zip(means, means[1:]))
    return bad == 0 and trend, f"bound violations {bad}/100; mean relative gap by n=20,50,100,200: {[f'{m:.2e}' for m in means]}"


def criterion_6():
    start = time.perf_counter()
    points = assumption_check(20, list(REFERENCE_PCT), 100, seed=0)
    elapsed = time.perf_counter() - start
    got = {p.x: p.mean("nonnegative_pct") for p in points}
    off = {d: got[d] - REFERENCE_PCT[d] for d in REFERENCE_PCT}
    ok = all(abs(v) <= 5 for v in off.values()) and elapsed < 600
    table = ", ".join(f"d={d}: {got[d]:.2f} vs {REFERENCE_PCT[d]}" for d in REFERENCE_PCT)
    return ok, f"{table}; {elapsed:.1f} s (< 600 s)"


def criterion_7():
    ratios = [round(0.1 * i, 1) for i in range(1, 11)]
    parts, ok = [], True
    for name, g in (("ER", gen_er(200, er_probability(200, 10), 7)), ("BA", gen_ba(200, 5, 7))):
        pts = tradeoff_curve(g, ratios, 100, seed=7, series=name)
        ve = monotone_violation([p.mean("entropy") for p in pts], increasing=True)
        vd = monotone_violation([p.mean("divergence") for p in pts], increasing=False)
        ok &= ve <= 0.005 and vd <= 0.005
        parts.append(f"{name} worst entropy dip {ve:.1e}, worst divergence rise {vd:.1e}")
    return ok, "; ".join(parts) + " (each <= 0.005 nats)"


def criterion_8():
    start = time.perf_counter()
    parts, ok = [], True
    for name, g in (("ER", gen_er(200, er_probability(200, 10), 8)), ("BA", gen_ba(200, 5, 8))):
        pts = beta_sparsity_curve(g, BETA_GRID, 10, HARNESS_CFG, series=name)
        kept = [p.mean("retained_edges") for p in pts]
        rho = spearman(BETA_GRID, kept)
        ok &= rho >= 0.95
        parts.append(f"{name} Spearman {rho:.3f}, mean kept {[round(k) for k in kept]} of {g.edge_count}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1200
    return ok, "; ".join(parts) + f"; {elapsed:.0f} s (< 1200 s)"


def criterion_9():
    g = load_karate()
    base = centralization(g)
    dense = sparse = 0
    for seed in range(10):
        dense += sparsify_pri(g, PriConfig(beta=1000.0, seed=seed)).retained_edge_count >= 0.95 * 78
        sparse += centralization(g, sparsify_pri(g, PriConfig(beta=0.0, seed=seed)).selection) > base
    ok = dense >= 8 and sparse >= 8
    return ok, f"beta=1000 keeps >= 95% in {dense}/10 seeds; beta=0 raises centralization above {base:.4f} in {sparse}/10 seeds"


def criterion_10():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        graphs = benchmark_graphs(os.environ.get("GRAPHPRI_DATA_DIR"), seed=0)
    missing = sorted(str(w.message).split()[1] for w in caught if "not found" in str(w.message))
    pts = sparsifier_comparison(graphs, ["pri", "random"], [0.3, 0.5, 0.7], 5, seed=0, cfg=HARNESS_CFG)
    wins = comparison_wins(pts)
    count = sum(wins.values())
    detail = ", ".join(f"{k}: {'win' if v else 'loss'}" for k, v in wins.items())
    if missing:
        detail += f"; unavailable: {', '.join(missing)}"
    return count >= 4, f"PRI <= random at every matched ratio on {count} of 6 graphs (need >= 4) [{detail}]"


def criterion_11(tmp: Path):
    karate = tmp / "karate.el"
    write_edge_list(load_karate(), karate)
    commands = [
        ["generate", "er", "-n", "30", "--mean-degree", "4", "--seed", "1"],
        ["generate", "ba", "-n", "30", "-m", "2", "--seed", "1"],
        ["generate", "sbm", "--blocks", "10,10", "--p-in", "0.5", "--p-out", "0.05", "--seed", "1"],
        ["generate", "knn-circle", "-n", "20", "-k", "10"],
        ["sparsify", str(karate), "--method", "pri", "--beta", "5", "--seed", "1", "--iterations", "50"],
        ["sparsify", str(karate), "--method", "random", "--ratio", "0.5", "--seed", "2"],
        ["sparsify", str(karate), "--method", "local-degree", "--exponent", "0.4"],
        ["sparsify", str(karate), "--method", "local-similarity", "--ratio", "0.5"],
        ["sparsify", str(karate), "--method", "effective-resistance", "--ratio", "0.5", "--seed", "3"],
        ["benchmark", "tradeoff", "--model", "ba", "-n", "50", "--replicates", "5"],
        ["benchmark", "beta-curve", "-n", "40", "--replicates", "2", "--betas", "0,1,10", "--iterations", "30"],
        ["benchmark", "assumption", "-n", "12", "--degrees", "2,4", "--replicates", "3"],
        ["benchmark", "corollary", "-n", "30", "--trials", "50"],
        ["benchmark", "comparison", "--graphs", "G3", "--ratios", "0.5", "--replicates", "1", "--iterations", "30"],
    ]
    failures = []
    for i, argv in enumerate(commands):
        a, b = tmp / f"a{i}", tmp / f"b{i}"
        if argv[0] == "benchmark":
            first = cli.main(argv + ["--out-dir", str(a)])
            artifacts = [f"{argv[1]}.csv", f"{argv[1]}.json"]
            second = cli.main(["replay", str(a / f"{argv[1]}.json"), "--out-dir", str(b)])
            pairs = [(a / n, b / n) for n in artifacts]
        else:
            extra = lambda d: ["--report", str(d) + ".json"] if argv[0] == "sparsify" else []
            first = cli.main(argv + ["-o", str(a)] + extra(a))
            second = cli.main(["replay", str(a), "-o", str(b)] + extra(b))
            pairs = [(a, b)] + ([(Path(f"{a}.json"), Path(f"{b}.json"))] if argv[0] == "sparsify" else [])
        if first != 0 or second != 0 or any(x.read_bytes() != y.read_bytes() for x, y in pairs):
            failures.append(" ".join(argv[:2]))
    return not failures, f"{len(commands) - len(failures)}/{len(commands)} commands replay byte-identically" + (
        f"; differing: {failures}" if failures else ""
    )


def criterion_12():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(50):
        g = random_connected_graph(int(rng.integers(3, 60)), rng, weighted=bool(rng.integers(2)))
        worst = max(worst, abs(float(g.weight @ effective_resistances(g)) - (g.node_count - 1)))
    return worst <= 1e-8, f"max |sum mu R - (N - 1)| = {worst:.1e} over 50 connected graphs"


# --------------------------------------------------------------------------


def _check(number, *args):
    ok, detail = globals()[f"criterion_{number}"](*args)
    assert report(number, ok, detail), detail


def test_criterion_01_incidence_oracle():
    _check(1)


def test_criterion_02_entropy_analytics():
    _check(2)


def test_criterion_03_divergence_axioms():
    _check(3)


def test_criterion_04_gradient():
    _check(4)


def test_criterion_05_entropy_gap_bound():
    _check(5)


def test_criterion_06_edge_addition_table():
    _check(6)


def test_criterion_07_tradeoff_trend():
    _check(7)


def test_criterion_08_beta_monotonicity():
    _check(8)


def test_criterion_09_karate_endpoints():
    _check(9)


def test_criterion_10_spectral_distance_vs_random():
    _check(10)


def test_criterion_11_cli_determinism(tmp_path):
    _check(11, tmp_path)


def test_criterion_12_foster_sum():
    _check(12)


if __name__ == "__main__":
    import tempfile

    failed = 0
    for k in range(1, 13):
        args = (Path(tempfile.mkdtemp()),) if k == 11 else ()
        ok, detail = globals()[f"criterion_{k}"](*args)
        failed += not report(k, ok, detail)
    sys.exit(1 if failed else 0)
