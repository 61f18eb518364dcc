"""Whitespace edge-list files and bundled / user-supplied datasets.

Format: one edge per line, ``u v`` or ``u v weight``, 0-based node indices,
``#`` starts a comment. A ``# nodes: N`` line fixes the node count (otherwise
it is the largest index + 1).
"""

from __future__ import annotations

import re
import warnings
from importlib import resources
from pathlib import Path

from .generators import gen_knn_circle, gen_sbm
from .graph import Graph, GraphError, build_graph

_NODES_HEADER = re.compile(r"^#\s*nodes:\s*(\d+)\s*$")


class EdgeListError(GraphError):
    """Malformed edge-list file."""


def parse_edge_list(text: str, node_count: int | None = None, source: str = "<string>") -> Graph:
    edges = []
    header_n = None
    max_index = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _NODES_HEADER.match(line)
            if m:
                header_n = int(m.group(1))
            continue
        parts = line.split("#", 1)[0].split()
        if len(parts) not in (2, 3):
            raise EdgeListError(f"{source}:{lineno}: expected 'u v [weight]', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise EdgeListError(f"{source}:{lineno}: cannot parse {raw!r}") from None
        max_index = max(max_index, u, v)
        edges.append((u, v, w, lineno))
    n = node_count if node_count is not None else header_n if header_n is not None else max_index + 1
    if n < 1:
        raise EdgeListError(f"{source}: no nodes")
    try:
        return build_graph(n, [e[:3] for e in edges])
    except GraphError as exc:
        # report the offending line: build_graph numbers edges from 0
        m = re.match(r"edge (\d+): (.*)", str(exc))
        if m:
            raise EdgeListError(f"{source}:{edges[int(m.group(1))][3]}: {m.group(2)}") from None
        raise EdgeListError(f"{source}: {exc}") from None


def read_edge_list(path, node_count: int | None = None) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(), node_count=node_count, source=str(path))


def _format_weight(w: float) -> str:
    short = format(w, ".12g")
    return short if float(short) == w else repr(w)


def format_edge_list(g: Graph, sort: bool = False) -> str:
    """Text of an edge list; weights only when != 1. ``sort`` orders by ``(u, v)``."""
    edges = sorted(g.edges) if sort else g.edges
    lines = [f"# nodes: {g.node_count}"]
    for u, v, w in edges:
        lines.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {_format_weight(w)}")
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path, sort: bool = False) -> None:
    Path(path).write_text(format_edge_list(g, sort=sort))


def read_konect(path) -> Graph:
    """Read a KONECT ``out.*`` file (1-based, ``%`` comments) as a simple unweighted graph.

    Extra columns are ignored; self-loops and repeated pairs are dropped.
    """
    pairs = set()
    max_index = 0
    for raw in Path(path).read_text().splitlines():
        parts = raw.split()
        if not parts or raw.lstrip().startswith("%"):
            continue
        u, v = int(parts[0]) - 1, int(parts[1]) - 1
        max_index = max(max_index, u, v)
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    return build_graph(max_index + 1, sorted(pairs))


def load_karate() -> Graph:
    """Zachary's karate club, 34 nodes and 78 unweighted edges."""
    text = resources.files("graphpri").joinpath("data/karate.edgelist").read_text()
    return parse_edge_list(text, source="karate.edgelist")


#: file stems looked up in a user data directory for the real-world graphs
EXTERNAL_DATASETS = {
    "G4": ("train_bombing", "moreno_train_train"),
    "G5": ("polbooks", "dimacs10-polbooks"),
    "G6": ("jazz", "arenas-jazz"),
}


def _load_external(data_dir: Path, stems) -> Graph | None:
    for stem in stems:
        for cand in (data_dir / f"{stem}.edgelist", data_dir / f"out.{stem}", data_dir / stem / f"out.{stem}"):
            if cand.exists():
                return read_konect(cand) if cand.name.startswith("out.") else read_edge_list(cand)
    return None


def benchmark_graphs(data_dir=None, seed: int = 0) -> dict[str, Graph]:
    """The six sparsification benchmarks G1..G6, skipping any that are unavailable.

    G1 (ring k-NN, 20 nodes, k=10), G2 (4-block SBM, 30 nodes per block,
    p_in=2^-2, p_out=2^-7) and G3 (karate) are always present. G4 train
    bombing, G5 political books and G6 jazz musicians are read from
    ``data_dir`` (``<stem>.edgelist`` or KONECT ``out.<name>`` files).
    """
    graphs = {
        "G1": gen_knn_circle(20, 10),
        "G2": gen_sbm([30, 30, 30, 30], 2.0**-2, 2.0**-7, seed),
        "G3": load_karate(),
    }
    for key, stems in EXTERNAL_DATASETS.items():
        g = _load_external(Path(data_dir), stems) if data_dir is not None else None
        if g is None:
            warnings.warn(f"dataset {key} ({stems[0]}) not found; skipped", RuntimeWarning, stacklevel=2)
            continue
        graphs[key] = g
    return graphs
