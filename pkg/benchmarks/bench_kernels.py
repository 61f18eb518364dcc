"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 50] [--sizes 200,1000,5000]

Each size is a BA graph with n nodes and m=5; results agree to 1e-10
before timing starts. Compilation happens outside the timed region.
"""

import argparse
import timeit

import numpy as np

from graphpri import _kernels
from graphpri.generators import gen_ba


def _cases(g, rng):
    args = (g.node_count, g.head, g.tail, g.weight)
    mat = rng.standard_normal((g.node_count, g.node_count))
    mat = mat + mat.T
    lam = np.abs(rng.standard_normal(g.node_count))
    lam /= lam.sum()
    return {
        "laplacian": (_kernels.laplacian_numpy, _kernels.laplacian_numba, args),
        "degrees": (_kernels.degrees_numpy, _kernels.degrees_numba, args),
        "edge_quadratic_forms": (
            _kernels.edge_quadratic_forms_numpy,
            _kernels.edge_quadratic_forms_numba,
            (mat, g.head, g.tail, g.weight),
        ),
        "entropy": (_kernels.entropy_from_eigenvalues_numpy, _kernels.entropy_from_eigenvalues_numba, (lam, 1e-12)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=50)
    parser.add_argument("--sizes", default="200,1000,5000")
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'n':>6}{'edges':>8}{'numpy us':>12}{'numba us':>12}{'speedup':>9}")
    for n in [int(s) for s in args.sizes.split(",")]:
        g = gen_ba(n, 5, seed=0)
        for name, (ref, fast, a) in _cases(g, rng).items():
            np.testing.assert_allclose(fast(*a), ref(*a), rtol=0, atol=1e-10)  # also compiles
            t_ref = min(timeit.repeat(lambda: ref(*a), number=1, repeat=args.repeat)) * 1e6
            t_fast = min(timeit.repeat(lambda: fast(*a), number=1, repeat=args.repeat)) * 1e6
            print(f"{name:<22}{n:>6}{g.edge_count:>8}{t_ref:>12.1f}{t_fast:>12.1f}{t_ref / t_fast:>9.2f}")


if __name__ == "__main__":
    main()
