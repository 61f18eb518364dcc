"""Spectral-fidelity metrics and the experiment harness.

Harness functions return lists of :class:`CurvePoint`; :func:`write_csv` and
:func:`write_json` serialize them with a fixed column order
``x, metric, mean, std, n, seed, series``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import spearmanr

from .baselines import (
    effective_resistance_sparsifier,
    local_degree,
    local_similarity,
    random_sparsifier,
    target_count,
)
from .generators import er_probability, gen_er
from .graph import EmptyGraphError, Graph, GraphError, laplacian, trace_normalize
from .measures import EIGEN_FLOOR, entropy_of_spectrum, qjs_divergence, von_neumann_entropy
from .optimizer import PriConfig, harden, sparsify_pri

METRICS = (
    "entropy",
    "divergence",
    "spectral_distance",
    "centralization",
    "retained_edges",
    "retained_ratio",
    "nonnegative_pct",
    "fraction_decreased",
)

CSV_COLUMNS = ("x", "metric", "mean", "std", "n", "seed", "series")


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic child seed for one (grid point, replicate, ...) of a run."""
    return int(np.random.SeedSequence([int(seed), *[int(k) for k in keys]]).generate_state(1)[0])


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------


def fiedler_vector(lap: np.ndarray) -> np.ndarray:
    """Unit eigenvector of the second-smallest Laplacian eigenvalue.

    The sign is fixed so the first entry that is not ~0 is positive.
    """
    lam, vec = np.linalg.eigh(lap)
    if lam.shape[0] < 2 or lam[1] <= 1e-10:
        raise GraphError("graph is disconnected (algebraic connectivity ~ 0); Fiedler vector undefined")
    x = vec[:, 1] / np.linalg.norm(vec[:, 1])
    first = np.flatnonzero(np.abs(x) > 1e-12)[0]
    return x if x[first] > 0 else -x


def spectral_distance(rho: np.ndarray, sigma: np.ndarray, x: np.ndarray) -> float:
    """Geodesic distance between two Laplacians along the probe vector ``x``.

    ``arccosh(1 + |(rho - sigma) x|^2 |x|^2 / (2 (x' rho x)(x' sigma x)))``.
    Returns ``inf`` when ``x`` is (numerically) in the null space of ``sigma``.
    """
    qr = float(x @ rho @ x)
    qs = float(x @ sigma @ x)
    if qr <= 1e-12:
        raise ValueError(f"x' rho x = {qr:.3e} must be positive")
    if qs <= 1e-12:
        return math.inf
    diff = (rho - sigma) @ x
    return float(np.arccosh(1.0 + float(diff @ diff) * float(x @ x) / (2.0 * qr * qs)))


def centralization(g: Graph, mask=None) -> float:
    """Freeman degree centralization on unweighted degrees, in [0, 1]."""
    n = g.node_count
    if n < 3:
        raise GraphError(f"centralization needs at least 3 nodes, got {n}")
    head, tail = g.head, g.tail
    if mask is not None:
        keep = np.asarray(mask) != 0
        head, tail = head[keep], tail[keep]
    deg = np.bincount(np.concatenate([head, tail]), minlength=n)
    return float(np.sum(deg.max() - deg) / (n * n - 3 * n + 2))


# --------------------------------------------------------------------------
# curve records
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricStat:
    mean: float
    std: float
    n: int

    @classmethod
    def of(cls, values: Iterable[float]) -> "MetricStat":
        v = np.asarray(list(values), dtype=np.float64)
        if v.size == 0:
            return cls(math.nan, math.nan, 0)
        return cls(float(v.mean()), float(v.std()), int(v.size))


@dataclass
class CurvePoint:
    x: float
    metrics: dict[str, MetricStat] = field(default_factory=dict)
    series: str = ""
    seed: int = 0

    def __post_init__(self):
        unknown = set(self.metrics) - set(METRICS)
        if unknown:
            raise ValueError(f"unknown metric names {sorted(unknown)}")

    def mean(self, name: str) -> float:
        return self.metrics[name].mean


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def commit_hash() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"], capture_output=True, text=True, check=True, cwd=Path(__file__).parent
        )
        return out.stdout.strip()
    except (OSError, subprocess.CalledProcessError):
        return "unknown"


def curve_rows(points: Sequence[CurvePoint]) -> list[tuple]:
    rows = []
    for p in points:
        for name in METRICS:
            if name in p.metrics:
                s = p.metrics[name]
                rows.append((p.x, name, s.mean, s.std, s.n, p.seed, p.series))
    return rows


def format_csv(points: Sequence[CurvePoint], provenance: dict | None = None) -> str:
    buf = io.StringIO()
    if provenance:
        for key in sorted(provenance):
            buf.write(f"# {key}: {json.dumps(provenance[key], sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in curve_rows(points):
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def curve_to_json(points: Sequence[CurvePoint], provenance: dict | None = None) -> dict:
    return {
        "provenance": provenance or {},
        "columns": list(CSV_COLUMNS),
        "rows": [[None if isinstance(v, float) and not math.isfinite(v) else v for v in row] for row in curve_rows(points)],
    }


def write_csv(points, path, provenance=None) -> None:
    Path(path).write_text(format_csv(points, provenance))


def write_json(points, path, provenance=None) -> None:
    Path(path).write_text(json.dumps(curve_to_json(points, provenance), indent=2, sort_keys=True) + "\n")


# --------------------------------------------------------------------------
# experiments
# --------------------------------------------------------------------------


def _density(g: Graph, mask=None) -> np.ndarray:
    return trace_normalize(laplacian(g, None if mask is None else np.asarray(mask, dtype=np.float64)))


def tradeoff_curve(g: Graph, ratios: Sequence[float], replicates: int, seed: int, series: str = "") -> list[CurvePoint]:
    """Entropy of random subgraphs and their divergence from ``g`` against the kept fraction."""
    rho = _density(g)
    points = []
    for i, ratio in enumerate(ratios):
        ent, div = [], []
        for r in range(replicates):
            mask = random_sparsifier(g, ratio, derive_seed(seed, i, r))
            sigma = _density(g, mask)
            ent.append(von_neumann_entropy(sigma))
            div.append(qjs_divergence(sigma, rho))
        points.append(
            CurvePoint(
                float(ratio),
                {"entropy": MetricStat.of(ent), "divergence": MetricStat.of(div)},
                series=series,
                seed=seed,
            )
        )
    return points


def monotone_violation(values: Sequence[float], increasing: bool = True) -> float:
    """Largest step against the expected direction between adjacent values (0 if monotone)."""
    v = np.asarray(values, dtype=np.float64)
    steps = np.diff(v) if increasing else -np.diff(v)
    return float(max(0.0, -steps.min())) if steps.size else 0.0


def beta_sparsity_curve(
    g: Graph, beta_grid: Sequence[float], replicates: int, cfg: PriConfig, series: str = ""
) -> list[CurvePoint]:
    """Mean number of edges kept by Graph-PRI at every ``beta`` of the grid."""
    if list(beta_grid) != sorted(beta_grid):
        raise ValueError("beta_grid must be sorted ascending")
    points = []
    for i, beta in enumerate(beta_grid):
        kept = []
        for r in range(replicates):
            report = sparsify_pri(g, replace(cfg, beta=float(beta), seed=derive_seed(cfg.seed, i, r)))
            kept.append(report.retained_edge_count)
        points.append(
            CurvePoint(
                float(beta),
                {
                    "retained_edges": MetricStat.of(kept),
                    "retained_ratio": MetricStat.of(np.asarray(kept) / g.edge_count),
                },
                series=series,
                seed=cfg.seed,
            )
        )
    return points


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    return float(spearmanr(x, y).statistic)


def edge_addition_nonnegative_fraction(g: Graph, tol: float = 1e-12) -> float:
    """Fraction of absent node pairs whose addition does not lower the von Neumann entropy.

    NaN when the graph is complete.
    """
    lap = laplacian(g)
    tr = np.trace(lap)
    if not tr > 0:
        raise EmptyGraphError("graph has no edges")
    base = entropy_of_spectrum(np.linalg.eigvalsh(lap / tr))
    present = g.edge_set()
    hits = total = 0
    for u in range(g.node_count):
        for v in range(u + 1, g.node_count):
            if (u, v) in present:
                continue
            lap[u, u] += 1.0
            lap[v, v] += 1.0
            lap[u, v] -= 1.0
            lap[v, u] -= 1.0
            s = entropy_of_spectrum(np.linalg.eigvalsh(lap / (tr + 2.0)))
            lap[u, u] -= 1.0
            lap[v, v] -= 1.0
            lap[u, v] += 1.0
            lap[v, u] += 1.0
            total += 1
            hits += s - base >= -tol
    return hits / total if total else math.nan


def assumption_check(
    n: int, target_mean_degrees: Sequence[float], replicates: int, seed: int = 0
) -> list[CurvePoint]:
    """Percentage of single-edge additions that do not decrease the entropy, on ER graphs.

    For every target mean degree, ``replicates`` ER graphs are drawn and every
    absent pair is tried; the per-graph percentages are averaged. Edgeless
    draws are skipped and complete graphs give an empty (NaN) row.
    """
    if n < 3:
        raise GraphError(f"assumption_check needs n >= 3, got {n}")
    points = []
    for i, d in enumerate(target_mean_degrees):
        pct = []
        for r in range(replicates):
            g = gen_er(n, er_probability(n, d), derive_seed(seed, i, r))
            if g.edge_count == 0:
                continue
            frac = edge_addition_nonnegative_fraction(g)
            if not math.isnan(frac):
                pct.append(100.0 * frac)
        if not pct:
            warnings.warn(f"mean degree {d}: no graph with absent pairs", RuntimeWarning, stacklevel=2)
        points.append(CurvePoint(float(d), {"nonnegative_pct": MetricStat.of(pct)}, series=f"er{n}", seed=seed))
    return points


def corollary_check(g: Graph, sparsify_ratio: float, trials: int, seed: int) -> float:
    """Fraction of trials in which re-adding one removed edge does not raise the divergence.

    Every trial draws a fresh random sparsification at ``sparsify_ratio`` and
    one of its removed edges, and compares ``QJS(subgraph + e, G)`` with
    ``QJS(subgraph, G)``.
    """
    rho = _density(g)
    hits = done = 0
    for t in range(trials):
        rng = np.random.default_rng(derive_seed(seed, t))
        mask = random_sparsifier(g, sparsify_ratio, int(rng.integers(2**63)))
        removed = np.flatnonzero(mask == 0)
        if removed.size == 0:
            continue
        before = qjs_divergence(_density(g, mask), rho)
        plus = mask.copy()
        plus[rng.choice(removed)] = 1
        after = qjs_divergence(_density(g, plus), rho)
        done += 1
        hits += after <= before + 1e-12
    return hits / done if done else math.nan


# --------------------------------------------------------------------------
# sparsifier comparison
# --------------------------------------------------------------------------

COMPARISON_METHODS = ("pri", "random", "local_degree", "local_similarity", "effective_resistance")
DEFAULT_PRI_BETAS = (0.5, 1.0, 2.0, 5.0, 10.0, 50.0)


def local_degree_at_ratio(g: Graph, ratio: float) -> np.ndarray:
    """Local-degree mask whose size is closest to ``ratio * M`` over a grid of exponents."""
    k = target_count(g.edge_count, ratio)
    best = None
    for e in np.linspace(0.0, 1.0, 101):
        mask = local_degree(g, float(e))
        gap = abs(int(mask.sum()) - k)
        if best is None or gap < best[0]:
            best = (gap, mask)
    return best[1]


def pri_at_ratio(g: Graph, ratio: float, cfg: PriConfig, betas: Sequence[float] = DEFAULT_PRI_BETAS):
    """Graph-PRI mask with exactly ``ceil(ratio * M)`` edges.

    Runs every ``beta`` in ``betas``, picks the one whose own hard draw kept
    the fraction closest to ``ratio``, and keeps that run's top-k edge
    probabilities. Returns ``(mask, beta)``.
    """
    k = target_count(g.edge_count, ratio)
    best = None
    for beta in betas:
        report = sparsify_pri(g, replace(cfg, beta=float(beta)))
        gap = abs(report.retained_edge_count - k)
        if best is None or gap < best[0]:
            best = (gap, report, beta)
    return harden(best[1].soft_selection, top_k=k), best[2]


def method_mask(g: Graph, method: str, ratio: float, seed: int, cfg: PriConfig | None = None):
    if method == "pri":
        return pri_at_ratio(g, ratio, replace(cfg or PriConfig(), seed=seed))[0]
    if method == "random":
        return random_sparsifier(g, ratio, seed)
    if method == "local_degree":
        return local_degree_at_ratio(g, ratio)
    if method == "local_similarity":
        return local_similarity(g, ratio)
    if method == "effective_resistance":
        return effective_resistance_sparsifier(g, ratio, seed)
    raise ValueError(f"unknown method {method!r}; expected one of {COMPARISON_METHODS}")


def sparsifier_comparison(
    graphs: dict[str, Graph],
    methods: Sequence[str],
    ratios: Sequence[float],
    replicates: int,
    seed: int = 0,
    cfg: PriConfig | None = None,
) -> list[CurvePoint]:
    """Spectral distance and centralization of every method's subgraph, per graph and ratio.

    The probe vector is the Fiedler vector of the original Laplacian, fixed
    across methods and ratios. Deterministic methods (local degree, local
    similarity) run once regardless of ``replicates``.
    """
    for m in methods:
        if m not in COMPARISON_METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {COMPARISON_METHODS}")
    points = []
    for gi, (name, g) in enumerate(graphs.items()):
        rho = laplacian(g)
        try:
            x = fiedler_vector(rho)
        except GraphError as exc:
            warnings.warn(f"{name}: {exc}; skipped", RuntimeWarning, stacklevel=2)
            continue
        for mi, method in enumerate(methods):
            reps = 1 if method in ("local_degree", "local_similarity") else replicates
            for ri, ratio in enumerate(ratios):
                dist, cent, kept = [], [], []
                for r in range(reps):
                    mask = method_mask(g, method, ratio, derive_seed(seed, gi, mi, ri, r), cfg)
                    dist.append(spectral_distance(rho, laplacian(g, mask.astype(np.float64)), x))
                    cent.append(centralization(g, mask))
                    kept.append(int(mask.sum()))
                points.append(
                    CurvePoint(
                        float(ratio),
                        {
                            "spectral_distance": MetricStat.of(dist),
                            "centralization": MetricStat.of(cent),
                            "retained_edges": MetricStat.of(kept),
                        },
                        series=f"{name}:{method}",
                        seed=seed,
                    )
                )
    return points


def comparison_wins(points: Sequence[CurvePoint], method: str = "pri", against: str = "random") -> dict[str, bool]:
    """Per graph: does ``method`` have mean spectral distance <= ``against`` at every ratio?"""
    table: dict[str, dict[str, dict[float, float]]] = {}
    for p in points:
        graph, m = p.series.split(":")
        table.setdefault(graph, {}).setdefault(m, {})[p.x] = p.mean("spectral_distance")
    out = {}
    for graph, by_method in table.items():
        if method in by_method and against in by_method:
            mine, theirs = by_method[method], by_method[against]
            out[graph] = all(mine[x] <= theirs[x] for x in mine if x in theirs)
    return out
