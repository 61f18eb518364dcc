import numpy as np
import pytest

from graphpri import EdgeListError, build_graph, centralization, parse_edge_list, read_edge_list, write_edge_list
from graphpri.generators import er_probability, gen_ba, gen_er, gen_knn_circle, gen_sbm
from graphpri.graph import degrees, is_connected
from graphpri.io import benchmark_graphs, format_edge_list, load_karate, read_konect


def valid(g):
    pairs = list(zip(g.head.tolist(), g.tail.tolist()))
    return len(set(pairs)) == len(pairs) and all(u < v for u, v in pairs)


def test_er_extremes():
    assert gen_er(10, 0.0, 1).edge_count == 0
    assert gen_er(10, 1.0, 1).edge_count == 45
    with pytest.raises(ValueError):
        gen_er(10, 1.5, 1)


def test_er_mean_degree():
    p = er_probability(200, 10)
    assert p == pytest.approx(10 / 199)
    means = [2 * gen_er(200, p, s).edge_count / 200 for s in range(100)]
    assert abs(np.mean(means) - 10) <= 0.5


def test_er_edge_frequency_uniform():
    # every pair appears with probability p
    hits = np.zeros((6, 6))
    for s in range(4000):
        g = gen_er(6, 0.3, s)
        hits[g.head, g.tail] += 1
    freq = hits[np.triu_indices(6, 1)] / 4000
    np.testing.assert_allclose(freq, 0.3, atol=0.03)


def test_ba_tree_and_tails():
    g = gen_ba(50, 1, 3)
    assert g.edge_count == 49 and is_connected(g)
    heavy = 0
    for s in range(100):
        d = degrees(gen_ba(200, 5, s))
        heavy += d.max() > 3 * d.mean()
    assert heavy > 50
    assert gen_ba(100, 5, 8) == gen_ba(100, 5, 8)
    assert gen_ba(200, 5, 0).edge_count == 10 + 195 * 5
    with pytest.raises(ValueError):
        gen_ba(5, 5, 0)


def test_sbm():
    g = gen_sbm([30, 30, 30, 30], 2.0**-2, 2.0**-7, 7)
    assert g.node_count == 120 and valid(g)
    block = np.repeat(np.arange(4), 30)
    cross = np.count_nonzero(block[g.head] != block[g.tail])
    assert cross < 0.2 * g.edge_count
    iso = gen_sbm([10, 10], 0.5, 0.0, 1)
    assert np.all(np.repeat([0, 1], 10)[iso.head] == np.repeat([0, 1], 10)[iso.tail])


def test_sbm_degenerate_is_er():
    counts = [gen_sbm([8, 7], 0.4, 0.4, s).edge_count for s in range(2000)]
    assert np.mean(counts) == pytest.approx(0.4 * 105, rel=0.02)


def test_knn_circle():
    g = gen_knn_circle(20, 10)
    assert g.edge_count == 100
    assert np.all(degrees(g) == 10)
    assert centralization(g) == 0.0
    c = gen_knn_circle(7, 2)
    assert c.edge_count == 7 and np.all(degrees(c) == 2) and is_connected(c)
    with pytest.raises(ValueError):
        gen_knn_circle(10, 3)
    with pytest.raises(ValueError):
        gen_knn_circle(10, 10)


@pytest.mark.parametrize("make", [lambda s: gen_er(30, 0.2, s), lambda s: gen_ba(30, 3, s), lambda s: gen_sbm([10, 20], 0.3, 0.05, s)])
def test_generators_seeded_and_valid(make):
    assert make(4) == make(4)
    assert valid(make(4))


def test_parse_examples():
    g = parse_edge_list("0 1\n1 2\n")
    assert g.edges == [(0, 1, 1.0), (1, 2, 1.0)]
    g = parse_edge_list("0 1 2.5\n")
    assert g.edges == [(0, 1, 2.5)]
    g = parse_edge_list("# nodes: 6\n# comment\n\n0 1  # trailing\n")
    assert g.node_count == 6


@pytest.mark.parametrize(
    "text, line",
    [("0 1\n1 1\n", 2), ("0 1\n0 x\n", 2), ("0 1\n1 0\n", 2), ("0\n", 1), ("0 1 -1\n", 1), ("0 1 2 3\n", 1)],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(EdgeListError, match=f"<string>:{line}:"):
        parse_edge_list(text)


def test_node_count_override():
    assert parse_edge_list("0 1\n", node_count=5).node_count == 5
    with pytest.raises(EdgeListError):
        parse_edge_list("0 7\n", node_count=5)


def test_round_trip_byte_stable(tmp_path, rng):
    g = build_graph(6, [(0, 1, 0.1), (2, 5, 1.0), (1, 4, 1 / 3), (3, 4, 2.0)])
    p = tmp_path / "g.el"
    write_edge_list(g, p)
    back = read_edge_list(p)
    assert back == g
    p2 = tmp_path / "g2.el"
    write_edge_list(back, p2)
    assert p.read_bytes() == p2.read_bytes()
    w = rng.uniform(0.1, 10, 20)
    g = build_graph(21, [(i, i + 1, float(x)) for i, x in enumerate(w)])
    assert parse_edge_list(format_edge_list(g)) == g


def test_sorted_format():
    g = build_graph(3, [(1, 2), (0, 1)])
    assert format_edge_list(g, sort=True).splitlines()[1:] == ["0 1", "1 2"]


def test_karate_bundled_matches_networkx():
    nx = pytest.importorskip("networkx")
    g = load_karate()
    assert g.edge_set() == {(min(u, v), max(u, v)) for u, v in nx.karate_club_graph().edges()}


def test_konect_reader(tmp_path):
    p = tmp_path / "out.toy"
    p.write_text("% sym unweighted\n% 4 3 3\n1 2\n2 1\n2 3 5\n3 3\n")
    g = read_konect(p)
    assert g.node_count == 3 and g.edges == [(0, 1, 1.0), (1, 2, 1.0)]


@pytest.mark.filterwarnings("ignore:dataset")
def test_benchmark_graphs(tmp_path):
    with pytest.warns(RuntimeWarning, match="G4"):
        graphs = benchmark_graphs(None)
    assert sorted(graphs) == ["G1", "G2", "G3"]
    (tmp_path / "jazz.edgelist").write_text("0 1\n1 2\n")
    with pytest.warns(RuntimeWarning):
        graphs = benchmark_graphs(tmp_path)
    assert graphs["G6"].edge_count == 2
