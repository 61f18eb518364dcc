"""Entropy-driven graph sparsification (Graph-PRI)."""

from ._kernels import USE_NUMBA
from .baselines import (
    SparsifierSpec,
    effective_resistance_sparsifier,
    effective_resistances,
    local_degree,
    local_similarity,
    random_sparsifier,
    sparsify_baseline,
)
from .evaluation import (
    CurvePoint,
    assumption_check,
    beta_sparsity_curve,
    centralization,
    corollary_check,
    fiedler_vector,
    sparsifier_comparison,
    spectral_distance,
    tradeoff_curve,
)
from .generators import er_probability, gen_ba, gen_er, gen_knn_circle, gen_sbm
from .graph import (
    EmptyGraphError,
    Graph,
    GraphError,
    IncidenceMatrix,
    build_graph,
    connected_components,
    degrees,
    incidence_matrix,
    laplacian,
    subgraph_laplacian,
    trace_normalize,
)
from .io import EdgeListError, load_karate, parse_edge_list, read_edge_list, write_edge_list
from .measures import (
    entropy_gap_bound,
    graph_entropy,
    pri_objective,
    qjs_divergence,
    shannon_degree_entropy,
    von_neumann_entropy,
)
from .optimizer import (
    OptimizationError,
    PriConfig,
    SparsifyReport,
    analytical_gradient,
    gumbel_softmax_sample,
    harden,
    sparsify_pri,
)

__version__ = "0.1.0"
