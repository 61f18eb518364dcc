"""Command-line interface: ``graphpri {generate,sparsify,benchmark,verify,replay}``.

Every artifact embeds the run configuration (output paths excluded), and
``graphpri replay ARTIFACT`` re-runs it; identical inputs give identical bytes.
Exit codes: 0 success, 1 property or benchmark failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import checks, evaluation
from .baselines import SparsifierSpec, local_degree, sparsify_baseline
from .generators import er_probability, gen_ba, gen_er, gen_knn_circle, gen_sbm
from .graph import GraphError
from .io import benchmark_graphs, format_edge_list, read_edge_list
from .optimizer import OptimizationError, PriConfig, sparsify_pri

CONFIG_PREFIX = "# config: "
# argparse keys that never enter the embedded config
_LOCAL_KEYS = {"output", "report", "out_dir", "func", "artifact"}


class UsageError(Exception):
    """Bad input or I/O; maps to exit code 2."""


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def run_config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _LOCAL_KEYS}


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, path) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}")


def _read_graph(path: str):
    try:
        return read_edge_list(path)
    except FileNotFoundError:
        raise UsageError(f"input file not found: {path}")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _edge_list_artifact(g, config: dict) -> str:
    return CONFIG_PREFIX + json.dumps(config, sort_keys=True) + "\n" + format_edge_list(g)


# --------------------------------------------------------------------------
# generate
# --------------------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.model == "er":
        if (args.p is None) == (args.mean_degree is None):
            raise UsageError("generate er needs exactly one of -p or --mean-degree")
        p = args.p if args.p is not None else er_probability(args.n, args.mean_degree)
        g = gen_er(args.n, p, args.seed)
    elif args.model == "ba":
        g = gen_ba(args.n, args.m, args.seed)
    elif args.model == "sbm":
        g = gen_sbm(args.blocks, args.p_in, args.p_out, args.seed)
    else:
        g = gen_knn_circle(args.n, args.k)
    _emit(_edge_list_artifact(g, run_config(args)), args.output)
    return 0


# --------------------------------------------------------------------------
# sparsify
# --------------------------------------------------------------------------


def _pri_config(args) -> PriConfig:
    return PriConfig(
        beta=args.beta,
        alpha=args.alpha,
        temperature=args.temperature,
        step_size=args.step_size,
        samples=args.samples,
        max_iterations=args.iterations,
        seed=args.seed,
        use_degree_entropy_approx=args.degree_entropy,
    )


def cmd_sparsify(args) -> int:
    g = _read_graph(args.input)
    config = run_config(args)
    report = {"config": config, "input": {"path": args.input, "node_count": g.node_count, "edge_count": g.edge_count}}
    if args.method == "pri":
        result = sparsify_pri(g, _pri_config(args))
        mask = result.selection
        report["result"] = result.to_dict()
    else:
        if args.method == "local-degree":
            mask = local_degree(g, args.exponent)
        else:
            mask = sparsify_baseline(g, SparsifierSpec(args.method.replace("-", "_"), args.ratio, args.seed))
        report["result"] = {
            "retained_edge_count": int(mask.sum()),
            "edge_count": g.edge_count,
            "selection": [int(x) for x in mask],
        }
    _emit(_edge_list_artifact(g.subgraph(mask), config), args.output)
    if args.report:
        _emit(_dump_json(report), args.report)
    kept = int(np.count_nonzero(mask))
    print(f"kept {kept} of {g.edge_count} edges", file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# benchmark
# --------------------------------------------------------------------------


def _model_graph(args, seed: int):
    if args.model == "er":
        return gen_er(args.n, er_probability(args.n, args.mean_degree), seed)
    return gen_ba(args.n, args.m, seed)


def _harness_pri_config(args) -> PriConfig:
    return PriConfig(
        alpha=args.alpha,
        step_size=args.step_size,
        samples=args.samples,
        max_iterations=args.iterations,
        seed=args.seed,
    )


def cmd_benchmark(args) -> int:
    seed = args.seed
    graph_seed = evaluation.derive_seed(seed, 0)
    if args.suite == "tradeoff":
        g = _model_graph(args, graph_seed)
        points = evaluation.tradeoff_curve(g, args.ratios, args.replicates, seed, series=args.model)
    elif args.suite == "beta-curve":
        g = _model_graph(args, graph_seed)
        points = evaluation.beta_sparsity_curve(g, args.betas, args.replicates, _harness_pri_config(args), series=args.model)
    elif args.suite == "assumption":
        points = evaluation.assumption_check(args.n, args.degrees, args.replicates, seed)
    elif args.suite == "corollary":
        g = _model_graph(args, graph_seed)
        frac = evaluation.corollary_check(g, args.ratio, args.trials, seed)
        points = [
            evaluation.CurvePoint(
                args.ratio, {"fraction_decreased": evaluation.MetricStat(frac, 0.0, args.trials)}, args.model, seed
            )
        ]
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            graphs = benchmark_graphs(args.data_dir, seed=graph_seed)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        if args.graphs:
            graphs = {k: v for k, v in graphs.items() if k in args.graphs}
        if not graphs:
            print("error: no benchmark graph available", file=sys.stderr)
            return 1
        points = evaluation.sparsifier_comparison(
            graphs, args.methods, args.ratios, args.replicates, seed, _harness_pri_config(args)
        )
    if not points:
        print("error: benchmark produced no data", file=sys.stderr)
        return 1
    provenance = {"config": run_config(args), "seed": seed, "commit": evaluation.commit_hash()}
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        evaluation.write_csv(points, out / f"{args.suite}.csv", provenance)
        evaluation.write_json(points, out / f"{args.suite}.json", provenance)
    except OSError as exc:
        raise UsageError(f"cannot write to {out}: {exc.strerror}")
    print(f"wrote {out / args.suite}.csv and .json", file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# verify / replay
# --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = checks.run_all(args.seed)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def embedded_config(path) -> dict:
    """Run configuration stored in an edge list, report or benchmark artifact."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    for line in text.splitlines():
        if line.startswith(CONFIG_PREFIX):
            return json.loads(line[len(CONFIG_PREFIX) :])
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"{path}: no embedded config found")
    if "provenance" in obj:
        return obj["provenance"]["config"]
    if "config" in obj:
        return obj["config"]
    raise UsageError(f"{path}: no embedded config found")


def cmd_replay(args) -> int:
    config = embedded_config(args.artifact)
    replayed = argparse.Namespace(**config, output=args.output, report=args.report, out_dir=args.out_dir)
    command = config.get("command")
    if command not in COMMANDS or command == "replay":
        raise UsageError(f"cannot replay command {command!r}")
    if command == "benchmark" and args.out_dir is None:
        raise UsageError("replaying a benchmark needs --out-dir")
    return COMMANDS[command](replayed)


COMMANDS = {
    "generate": cmd_generate,
    "sparsify": cmd_sparsify,
    "benchmark": cmd_benchmark,
    "verify": cmd_verify,
    "replay": cmd_replay,
}


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphpri", description="Entropy-driven graph sparsification (Graph-PRI).")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic graph as an edge list")
    gsub = gen.add_subparsers(dest="model", required=True)
    er = gsub.add_parser("er", help="Erdos-Renyi G(n, p)")
    er.add_argument("-n", type=int, required=True)
    er.add_argument("-p", type=float)
    er.add_argument("--mean-degree", type=float)
    ba = gsub.add_parser("ba", help="Barabasi-Albert preferential attachment")
    ba.add_argument("-n", type=int, required=True)
    ba.add_argument("-m", type=int, required=True)
    sbm = gsub.add_parser("sbm", help="stochastic block model")
    sbm.add_argument("--blocks", type=_csv_ints, required=True)
    sbm.add_argument("--p-in", type=float, required=True)
    sbm.add_argument("--p-out", type=float, required=True)
    knn = gsub.add_parser("knn-circle", help="ring lattice joining each node to its k nearest neighbours")
    knn.add_argument("-n", type=int, required=True)
    knn.add_argument("-k", type=int, required=True)
    for p in (er, ba, sbm, knn):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-o", "--output", help="output path (default stdout)")
    gen.set_defaults(func=cmd_generate)

    sp = sub.add_parser("sparsify", help="sparsify an edge list")
    sp.add_argument("input")
    sp.add_argument("--method", default="pri", choices=["pri", "random", "local-degree", "local-similarity", "effective-resistance"])
    sp.add_argument("--ratio", type=float, default=0.5, help="kept edge fraction for random, local-similarity, effective-resistance")
    sp.add_argument("--exponent", type=float, default=0.5, help="local-degree exponent")
    sp.add_argument("--beta", type=float, default=1.0)
    sp.add_argument("--alpha", type=float, default=0.005)
    sp.add_argument("--temperature", type=float, default=1.0)
    sp.add_argument("--step-size", type=float, default=0.05)
    sp.add_argument("--samples", type=int, default=5)
    sp.add_argument("--iterations", type=int, default=500)
    sp.add_argument("--degree-entropy", action="store_true", help="use the Shannon degree-entropy surrogate")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", help="sparsified edge list (default stdout)")
    sp.add_argument("--report", help="JSON report path")
    sp.set_defaults(func=cmd_sparsify)

    bm = sub.add_parser("benchmark", help="run an experiment suite and write CSV/JSON curves")
    bm.add_argument("suite", choices=["tradeoff", "beta-curve", "comparison", "assumption", "corollary"])
    bm.add_argument("--model", choices=["er", "ba"], default="er")
    bm.add_argument("-n", type=int, default=None, help="node count (default 200; 20 for assumption; 50 for corollary)")
    bm.add_argument("--mean-degree", type=float, default=None, help="ER mean degree (default 10; 5 for corollary)")
    bm.add_argument("-m", type=int, default=5, help="BA edges per new node")
    bm.add_argument("--replicates", type=int, default=None)
    bm.add_argument("--ratios", type=_csv_floats, default=None)
    bm.add_argument("--betas", type=_csv_floats, default=[0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0])
    bm.add_argument("--degrees", type=_csv_floats, default=[1.6, 2.5, 3.0, 4.0, 5.0])
    bm.add_argument("--ratio", type=float, default=0.5, help="corollary sparsification ratio")
    bm.add_argument("--trials", type=int, default=1000)
    bm.add_argument("--methods", type=lambda s: s.split(","), default=list(evaluation.COMPARISON_METHODS))
    bm.add_argument("--graphs", type=lambda s: s.split(","), default=None, help="subset of G1..G6")
    bm.add_argument("--data-dir", default=None, help="directory holding the G4-G6 edge lists")
    bm.add_argument("--alpha", type=float, default=0.005)
    bm.add_argument("--step-size", type=float, default=0.05)
    bm.add_argument("--samples", type=int, default=1)
    bm.add_argument("--iterations", type=int, default=150)
    bm.add_argument("--seed", type=int, default=0)
    bm.add_argument("--out-dir", default="results")
    bm.set_defaults(func=cmd_benchmark)

    vf = sub.add_parser("verify", help="run the fast invariant suite")
    vf.add_argument("--seed", type=int, default=0)
    vf.set_defaults(func=cmd_verify)

    rp = sub.add_parser("replay", help="re-run the configuration embedded in an artifact")
    rp.add_argument("artifact")
    rp.add_argument("-o", "--output")
    rp.add_argument("--report")
    rp.add_argument("--out-dir")
    rp.set_defaults(func=cmd_replay)
    return parser


_SUITE_DEFAULTS = {
    "tradeoff": {"n": 200, "mean_degree": 10.0, "replicates": 100, "ratios": [round(0.1 * i, 1) for i in range(1, 11)]},
    "beta-curve": {"n": 200, "mean_degree": 10.0, "replicates": 10},
    "assumption": {"n": 20, "replicates": 100},
    "corollary": {"n": 50, "mean_degree": 5.0},
    "comparison": {"replicates": 5, "ratios": [0.3, 0.5, 0.7]},
}


def _fill_defaults(args) -> None:
    if args.command != "benchmark":
        return
    for key, value in _SUITE_DEFAULTS[args.suite].items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key in ("n", "mean_degree", "replicates", "ratios"):
        if getattr(args, key) is None:
            setattr(args, key, {"n": 200, "mean_degree": 10.0, "replicates": 10, "ratios": [0.5]}[key])


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _fill_defaults(args)
    try:
        return args.func(args)
    except (UsageError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OptimizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
