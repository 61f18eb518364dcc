"""Learning an edge-selection vector by minimizing the Graph-PRI objective.

The objective of a selection ``w`` is::

    J(w) = (1 - beta) S(sigma_w) + 2 beta S((sigma_w + rho) / 2) - alpha * sum_i ln sigma_w[i, i]

where ``sigma_w`` is the trace-normalized Laplacian of the selected subgraph
and ``rho`` that of the input graph. Every term is invariant to rescaling
``w``. Each edge carries a pair of logits; masks
are drawn with the Gumbel-softmax trick and the logits are updated from the
straight-through gradient of the sample-averaged objective.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .graph import EmptyGraphError, Graph, GraphError, IncidenceMatrix, degrees, laplacian, subgraph_laplacian
from .measures import EIGEN_FLOOR, degree_entropy, pri_objective

#: normalized degrees are clamped here inside the log barrier
DEGREE_FLOOR = 1e-12
#: clamp for the uniforms feeding the Gumbel transform
UNIFORM_CLAMP = 1e-12


class OptimizationError(RuntimeError):
    """The optimizer produced a non-finite objective or parameters."""


@dataclass(frozen=True)
class PriConfig:
    """Hyperparameters of one sparsification run.

    ``gradient="sampled"`` differentiates the Gumbel-softmax samples (hard
    forward, soft backward when ``hard_sampling``); ``gradient="analytic"``
    drops the noise and follows the exact gradient at the edge
    probabilities. ``final_temperature`` enables linear annealing.
    """

    beta: float = 1.0
    alpha: float = 0.005
    temperature: float = 1.0
    step_size: float = 0.05
    samples: int = 5
    max_iterations: int = 500
    seed: int = 0
    hard_sampling: bool = True
    use_degree_entropy_approx: bool = False
    optimizer: str = "adam"
    gradient: str = "sampled"
    final_temperature: float | None = None

    def __post_init__(self):
        if not self.beta >= 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.temperature > 0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")
        if self.final_temperature is not None and not self.final_temperature > 0:
            raise ValueError(f"final_temperature must be > 0, got {self.final_temperature}")
        if not self.step_size > 0:
            raise ValueError(f"step_size must be > 0, got {self.step_size}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.gradient not in ("sampled", "analytic"):
            raise ValueError(f"unknown gradient mode {self.gradient!r}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class OptimizerState:
    theta: np.ndarray
    iteration: int = 0
    objective_trace: list[float] = field(default_factory=list)


@dataclass
class SparsifyReport:
    selection: np.ndarray
    soft_selection: np.ndarray
    objective_trace: list[float]
    retained_edge_count: int
    wall_time: float
    config: PriConfig

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "config": self.config.to_dict(),
            "retained_edge_count": self.retained_edge_count,
            "edge_count": int(self.selection.shape[0]),
            "selection": [int(x) for x in self.selection],
            "soft_selection": [float(x) for x in self.soft_selection],
            "objective_trace": [float(x) for x in self.objective_trace],
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out


# --------------------------------------------------------------------------
# objective and its gradient
# --------------------------------------------------------------------------


def _entropy_and_log(mat: np.ndarray, floor: bool = False) -> tuple[float, np.ndarray]:
    """Entropy and matrix logarithm of a PSD matrix.

    By default the logarithm lives on the strictly positive eigenspace. With
    ``floor`` null directions get ``ln(EIGEN_FLOOR)`` instead: a finite
    stand-in for the -inf slope that adding a component-joining edge has.
    """
    lam, vec = np.linalg.eigh(mat)
    pos = lam > EIGEN_FLOOR
    logs = np.full_like(lam, np.log(EIGEN_FLOOR) if floor else 0.0)
    logs[pos] = np.log(lam[pos])
    ent = float(-np.sum(lam[pos] * logs[pos]))
    return ent, (vec * logs) @ vec.T


def _entropy_only(mat: np.ndarray) -> float:
    return _kernels.entropy_from_eigenvalues(np.linalg.eigvalsh(mat), EIGEN_FLOOR)


def _log_dist(p: np.ndarray) -> np.ndarray:
    out = np.full_like(p, np.log(EIGEN_FLOOR))
    pos = p > EIGEN_FLOOR
    out[pos] = np.log(p[pos])
    return out


class _Problem:
    """Input graph quantities reused across every objective evaluation."""

    def __init__(self, g: Graph, cfg: PriConfig):
        if g.edge_count == 0:
            raise EmptyGraphError("cannot sparsify a graph without edges")
        self.g = g
        self.cfg = cfg
        self.n = g.node_count
        self.head, self.tail, self.weight = g.head, g.tail, g.weight
        # trace contribution of each edge: ||b_m||^2
        self.col_norms = 2.0 * g.weight
        lap = laplacian(g)
        self.rho = lap / np.trace(lap)
        deg = degrees(g)
        self.rho_deg = deg / deg.sum()

    def evaluate(self, w: np.ndarray, beta: float, alpha: float, grad: bool = True):
        """Objective value and (optionally) its gradient with respect to ``w``."""
        value, gvec = self.entropy_terms(w, beta, grad)
        if alpha:
            bval, bgrad = self.barrier(w, alpha, grad)
            value += bval
            if grad:
                gvec = gvec + bgrad
        return value, gvec

    def entropy_terms(self, w: np.ndarray, beta: float, grad: bool = True):
        sel_weight = self.weight * w
        t = float(np.dot(self.col_norms, w))
        if not t > 0:
            raise EmptyGraphError("edge selection is empty")
        if self.cfg.use_degree_entropy_approx:
            return self._degree_terms(sel_weight, t, beta, grad)
        return self._spectral_terms(sel_weight, t, beta, grad)

    def barrier(self, w: np.ndarray, alpha: float, grad: bool = True):
        """``-alpha * sum_i ln max(deg_i / t, floor)`` and its slope in ``w``.

        ``deg_i / t`` is the diagonal of the trace-normalized subgraph
        Laplacian, so the barrier is scale-invariant in ``w`` like the
        entropy terms. An isolated node contributes the secant slope of the
        clamped log over the step ``w_m: 0 -> 1`` of an incident edge.
        """
        deg = _kernels.degrees(self.n, self.head, self.tail, self.weight * w)
        t = float(np.dot(self.col_norms, w))
        if not t > 0:
            raise EmptyGraphError("edge selection is empty")
        rel = deg / t
        isolated = rel <= DEGREE_FLOOR
        value = -alpha * float(np.sum(np.log(np.maximum(rel, DEGREE_FLOOR))))
        if not grad:
            return value, None
        inv = np.where(isolated, 0.0, 1.0 / np.maximum(deg, DEGREE_FLOOR))
        slope = self.weight * (inv[self.head] + inv[self.tail])
        slope -= np.count_nonzero(~isolated) * self.col_norms / t
        jump = np.log(self.weight / t) - np.log(DEGREE_FLOOR)
        slope += jump * (isolated[self.head].astype(float) + isolated[self.tail])
        return value, -alpha * slope

    def _spectral_terms(self, sel_weight, t, beta, grad):
        sigma = _kernels.laplacian(self.n, self.head, self.tail, sel_weight) / t
        value = 0.0
        if not grad:
            if beta != 1.0:
                value += (1.0 - beta) * _entropy_only(sigma)
            if beta:
                value += 2.0 * beta * _entropy_only(0.5 * (sigma + self.rho))
            return value, None
        k = np.zeros((self.n, self.n))
        if beta != 1.0:
            ent, log_sigma = _entropy_and_log(sigma, floor=True)
            value += (1.0 - beta) * ent
            k += (1.0 - beta) * log_sigma
        if beta:
            ent, log_mix = _entropy_and_log(0.5 * (sigma + self.rho), floor=True)
            value += 2.0 * beta * ent
            k += beta * log_mix
        g = -_kernels.edge_quadratic_forms(k, self.head, self.tail, self.weight)
        s = float(np.sum(k * sigma))
        return value, (g + self.col_norms * s) / t

    def _degree_terms(self, sel_weight, t, beta, grad):
        p = _kernels.degrees(self.n, self.head, self.tail, sel_weight) / t
        value = 0.0
        k = np.zeros(self.n)
        if beta != 1.0:
            value += (1.0 - beta) * degree_entropy(p)
            k += (1.0 - beta) * _log_dist(p)
        if beta:
            q = 0.5 * (p + self.rho_deg)
            value += 2.0 * beta * degree_entropy(q)
            k += beta * _log_dist(q)
        if not grad:
            return value, None
        g = -self.weight * (k[self.head] + k[self.tail])
        s = float(np.dot(k, p))
        return value, (g + self.col_norms * s) / t


def objective_with_barrier(g: Graph, b: IncidenceMatrix | None, w, cfg: PriConfig) -> float:
    """PRI objective of the subgraph selected by ``w`` plus the degree log-barrier.

    The barrier is ``-alpha * sum_i ln max(sigma_w[i, i], 1e-12)`` on the
    trace-normalized subgraph Laplacian.

    With ``cfg.use_degree_entropy_approx`` the von Neumann entropies are
    replaced by Shannon entropies of the (soft) degree distributions.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (g.edge_count,):
        raise GraphError(f"edge selection has shape {w.shape}, expected ({g.edge_count},)")
    if cfg.use_degree_entropy_approx:
        value, _ = _Problem(g, cfg).evaluate(w, cfg.beta, cfg.alpha, grad=False)
        return value
    b_mat = subgraph_laplacian(b, w) if b is not None else laplacian(g, w)
    tr = float(np.trace(b_mat))
    if not tr > 0:
        raise EmptyGraphError("edge selection is empty")
    lap = laplacian(g)
    value = pri_objective(b_mat / tr, lap / np.trace(lap), cfg.beta)
    if cfg.alpha:
        value -= cfg.alpha * float(np.sum(np.log(np.maximum(np.diag(b_mat) / tr, DEGREE_FLOOR))))
    return value


def _spectral_log(mat: np.ndarray) -> np.ndarray:
    return _entropy_and_log(mat)[1]


def analytical_gradient(b: IncidenceMatrix, w, beta: float) -> np.ndarray:
    """Exact gradient of the (barrier-free) PRI objective with respect to ``w``.

    With ``t = tr(B diag(w) B^T)``, ``K = (1 - beta) ln sigma_w + beta ln mix``
    and ``g = -diag(B^T K B)``, the gradient is ``(g + c * tr(K sigma_w)) / t``
    where ``c_m = ||b_m||^2``. The correction term is the exact Jacobian of
    the trace normalization; it makes the gradient orthogonal to ``w``.
    Logarithms act on the strictly positive eigenspace.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (b.shape[1],):
        raise GraphError(f"edge selection has shape {w.shape}, expected ({b.shape[1]},)")
    if np.any(w <= 0) or np.any(w >= 1):
        raise ValueError("analytical_gradient needs a strictly interior selection, 0 < w < 1")
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    bv = b.values
    a = (bv * w) @ bv.T
    t = float(np.trace(a))
    sigma = a / t
    full = bv @ bv.T
    rho = full / np.trace(full)
    k = (1.0 - beta) * _spectral_log(sigma) + beta * _spectral_log(0.5 * (sigma + rho))
    g = -np.einsum("im,ij,jm->m", bv, k, bv)
    c = np.einsum("im,im->m", bv, bv)
    return (g + c * float(np.sum(k * sigma))) / t


def redistribution_derivatives(b: IncidenceMatrix, w, beta: float) -> np.ndarray:
    """Derivatives of the objective under proportional reweighting, ``U @ grad``.

    Component ``i`` is the derivative at the normalized selection
    ``w~ = w / sum(w)`` along the direction that raises ``w~_i`` and shrinks
    every other entry in proportion to its size (``U_ii = 1``,
    ``U_ij = -w~_j / (1 - w~_i)``), which keeps ``sum(w~) = 1``.
    """
    w = np.asarray(w, dtype=np.float64)
    wt = w / w.sum()
    grad = analytical_gradient(b, w, beta) * w.sum()  # gradient at w~ (degree -1 homogeneity)
    u = -wt[None, :] / (1.0 - wt[:, None])
    np.fill_diagonal(u, 1.0)
    return u @ grad


def entropy_gradient_unnormalized(b: IncidenceMatrix, w) -> np.ndarray:
    """Gradient of ``S(sigma) = -tr(sigma ln sigma - sigma)`` with ``sigma = B diag(w) B^T``.

    Returns ``-diag(B^T ln(sigma) B)`` (no trace normalization).
    """
    bv = b.values
    sigma = (bv * np.asarray(w, dtype=np.float64)) @ bv.T
    return -np.einsum("im,ij,jm->m", bv, _spectral_log(sigma), bv)


# --------------------------------------------------------------------------
# Gumbel-softmax
# --------------------------------------------------------------------------


def gumbel_noise(shape, rng: np.random.Generator) -> np.ndarray:
    u = np.clip(rng.random(shape), UNIFORM_CLAMP, 1.0 - UNIFORM_CLAMP)
    return -np.log(-np.log(u))


def _softmax(x: np.ndarray) -> np.ndarray:
    z = x - x.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def gumbel_softmax_sample(theta, temperature: float, rng: np.random.Generator, hard: bool = False):
    """Draw a relaxed one-hot sample from logits ``theta`` (shape ``(2,)`` or ``(M, 2)``).

    Returns ``(sample, soft)``. ``soft`` is the tempered softmax of
    ``theta + Gumbel noise``; ``sample`` equals ``soft`` or, when ``hard``,
    the one-hot argmax of it (gradients are taken through ``soft``).
    """
    if not temperature > 0:
        raise ValueError(f"temperature must be > 0, got {temperature}")
    theta = np.asarray(theta, dtype=np.float64)
    soft = _softmax((theta + gumbel_noise(theta.shape, rng)) / temperature)
    if not hard:
        return soft, soft
    sample = np.zeros_like(soft)
    np.put_along_axis(sample, soft.argmax(axis=-1)[..., None], 1.0, axis=-1)
    return sample, soft


def edge_probabilities(theta: np.ndarray) -> np.ndarray:
    """Probability of keeping each edge under the logits (noise-free softmax)."""
    return _softmax(theta)[:, 1]


# --------------------------------------------------------------------------
# optimization loop
# --------------------------------------------------------------------------


class _Adam:
    def __init__(self, shape, lr, b1=0.9, b2=0.999, eps=1e-8):
        self.lr, self.b1, self.b2, self.eps = lr, b1, b2, eps
        self.m = np.zeros(shape)
        self.v = np.zeros(shape)
        self.k = 0

    def step(self, param, grad):
        self.k += 1
        self.m = self.b1 * self.m + (1 - self.b1) * grad
        self.v = self.b2 * self.v + (1 - self.b2) * grad * grad
        m_hat = self.m / (1 - self.b1**self.k)
        v_hat = self.v / (1 - self.b2**self.k)
        return param - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


class _SGD:
    def __init__(self, shape, lr):
        self.lr = lr

    def step(self, param, grad):
        return param - self.lr * grad


def _temperature(cfg: PriConfig, it: int) -> float:
    if cfg.final_temperature is None or cfg.max_iterations == 1:
        return cfg.temperature
    frac = it / (cfg.max_iterations - 1)
    return cfg.temperature + frac * (cfg.final_temperature - cfg.temperature)


def _sampled_step(problem: _Problem, theta, cfg: PriConfig, tau: float, rng):
    grad_theta = np.zeros_like(theta)
    values = []
    for _ in range(cfg.samples):
        sample, soft = gumbel_softmax_sample(theta, tau, rng, hard=cfg.hard_sampling)
        w = sample[:, 1]
        try:
            if cfg.hard_sampling:
                # straight-through: value on the hard mask; entropy slopes at the
                # relaxed sample, where they are finite; barrier slope at the mask
                value, _ = problem.entropy_terms(w, cfg.beta, grad=False)
                _, gw = problem.entropy_terms(soft[:, 1], cfg.beta)
                if cfg.alpha:
                    bval, bgrad = problem.barrier(w, cfg.alpha)
                    value += bval
                    gw = gw + bgrad
            else:
                value, gw = problem.evaluate(w, cfg.beta, cfg.alpha)
        except EmptyGraphError:
            continue
        values.append(value)
        # d soft_1 / d theta_1 = s1 s0 / tau = -d soft_1 / d theta_0
        d = gw * soft[:, 0] * soft[:, 1] / tau
        grad_theta[:, 1] += d
        grad_theta[:, 0] -= d
    if not values:
        raise OptimizationError("every Gumbel-softmax sample selected zero edges")
    return float(np.mean(values)), grad_theta / len(values)


def _analytic_step(problem: _Problem, theta, cfg: PriConfig, tau: float):
    p = _softmax(theta / tau)
    w = p[:, 1]
    value, gw = problem.evaluate(w, cfg.beta, cfg.alpha)
    d = gw * p[:, 0] * p[:, 1] / tau
    return value, np.stack([-d, d], axis=1)


def sparsify_pri(g: Graph, cfg: PriConfig) -> SparsifyReport:
    """Learn an edge selection for ``g`` and draw the final hard mask.

    Logits start standard normal. Every iteration averages the objective over
    ``cfg.samples`` Gumbel-softmax masks and takes one optimizer step; the
    returned selection is one more hard draw from the final logits.
    """
    start = time.perf_counter()
    problem = _Problem(g, cfg)
    rng = np.random.default_rng(cfg.seed)
    state = OptimizerState(theta=rng.standard_normal((g.edge_count, 2)))
    opt = _Adam(state.theta.shape, cfg.step_size) if cfg.optimizer == "adam" else _SGD(state.theta.shape, cfg.step_size)

    for it in range(cfg.max_iterations):
        tau = _temperature(cfg, it)
        if cfg.gradient == "analytic":
            value, grad = _analytic_step(problem, state.theta, cfg, tau)
        else:
            value, grad = _sampled_step(problem, state.theta, cfg, tau, rng)
        if not (np.isfinite(value) and np.all(np.isfinite(grad))):
            raise OptimizationError(
                f"non-finite objective/gradient at iteration {it}: value={value}, "
                f"theta range=[{state.theta.min():.3g}, {state.theta.max():.3g}], config={cfg}"
            )
        state.objective_trace.append(value)
        state.theta = opt.step(state.theta, grad)
        state.iteration = it + 1

    sample, _ = gumbel_softmax_sample(state.theta, _temperature(cfg, cfg.max_iterations - 1), rng, hard=True)
    selection = sample[:, 1].astype(np.int64)
    if selection.sum() == 0:
        warnings.warn("final Gumbel-softmax draw selected no edges", RuntimeWarning, stacklevel=2)
    return SparsifyReport(
        selection=selection,
        soft_selection=edge_probabilities(state.theta),
        objective_trace=state.objective_trace,
        retained_edge_count=int(selection.sum()),
        wall_time=time.perf_counter() - start,
        config=cfg,
    )


def harden(w_soft, threshold: float | None = None, top_k: int | None = None) -> np.ndarray:
    """Deterministic hard mask from a soft selection.

    Exactly one of ``threshold`` (keep ``w >= threshold``) or ``top_k`` (keep
    the ``k`` largest, ties to the lower edge index) must be given.
    """
    w = np.asarray(w_soft, dtype=np.float64)
    if (threshold is None) == (top_k is None):
        raise ValueError("give exactly one of threshold or top_k")
    if threshold is not None:
        return (w >= threshold).astype(np.int64)
    if not 0 <= top_k <= w.shape[0]:
        raise ValueError(f"top_k={top_k} outside [0, {w.shape[0]}]")
    order = np.lexsort((np.arange(w.shape[0]), -w))
    out = np.zeros(w.shape[0], dtype=np.int64)
    out[order[:top_k]] = 1
    return out
