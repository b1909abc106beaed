import numpy as np
import pytest

from netcontest.graphs import (
    ValuationVector,
    build_graph,
    load_graph,
    network_values,
    read_edge_list,
    read_valuations,
    transition_matrix,
    walk_weight_propagation,
    write_valuations,
)


def triangle_with_loops():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)], add_self_loops=True)


def dense_transition(graph):
    """Independent dense construction of the walk matrix."""
    m = np.zeros((graph.n, graph.n))
    for j in range(graph.n):
        for k in graph.adjacency[j]:
            m[j, k] = 1.0 / graph.degrees[j]
    return m


def random_graph(rng, n):
    """Random connected-enough graph: every node gets a self-loop."""
    edges = []
    seen = set()
    for _ in range(int(rng.integers(0, n * (n - 1) // 2 + 1))):
        u, v = rng.integers(0, n, 2)
        key = (min(u, v), max(u, v))
        if u != v and key not in seen:
            seen.add(key)
            edges.append((int(u), int(v)))
    return build_graph(n, edges, add_self_loops=True)


# -- construction -----------------------------------------------------------


def test_single_self_loop_node():
    g = build_graph(1, [(0, 0)])
    assert g.degrees.tolist() == [1]


def test_triangle_plus_self_loops_degrees():
    g = triangle_with_loops()
    assert g.degrees.tolist() == [3, 3, 3]


def test_two_node_path_degrees():
    g = build_graph(2, [(0, 1)], add_self_loops=False)
    assert g.degrees.tolist() == [1, 1]


def test_duplicate_edge_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        build_graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError, match="duplicate"):
        build_graph(2, [(1, 1), (1, 1)])


def test_out_of_range_edge_rejected():
    with pytest.raises(ValueError, match="out of range"):
        build_graph(2, [(0, 2)])


def test_isolated_node_rejected_without_self_loops():
    with pytest.raises(ValueError, match="isolated"):
        build_graph(3, [(0, 1)], add_self_loops=False)


def test_add_self_loops_only_where_missing():
    g = build_graph(2, [(0, 0), (0, 1)], add_self_loops=True)
    assert g.degrees.tolist() == [2, 2]
    assert g.has_self_loop(0) and g.has_self_loop(1)


# -- transition matrix ------------------------------------------------------


def test_transition_single_node():
    m = transition_matrix(build_graph(1, [(0, 0)]))
    assert np.array_equal(m.toarray(), [[1.0]])


def test_transition_two_node_path():
    m = transition_matrix(build_graph(2, [(0, 1)]))
    assert np.array_equal(m.toarray(), [[0.0, 1.0], [1.0, 0.0]])


def test_transition_triangle_matches_dense_oracle():
    g = triangle_with_loops()
    m = transition_matrix(g).toarray()
    assert np.abs(m - np.full((3, 3), 1 / 3)).max() <= 1e-15
    assert np.array_equal(m, dense_transition(g))


def test_transition_rows_sum_to_one():
    rng = np.random.default_rng(5)
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(1, 11)))
        sums = transition_matrix(g).sum(axis=1)
        assert np.abs(sums - 1.0).max() <= 1e-12


def test_transition_sparsity_matches_adjacency():
    rng = np.random.default_rng(6)
    g = random_graph(rng, 8)
    m = transition_matrix(g).tocsr()
    for j in range(g.n):
        cols = m.indices[m.indptr[j] : m.indptr[j + 1]]
        assert np.array_equal(np.sort(cols), g.adjacency[j])


# -- propagation ------------------------------------------------------------


def test_walk_zero_steps_is_identity():
    g = triangle_with_loops()
    w = np.array([2.0, 0.5, 1.0])
    out = walk_weight_propagation(transition_matrix(g), w, 0)
    assert out == pytest.approx(w)


def test_walk_single_loop_node_fixed():
    m = transition_matrix(build_graph(1, [(0, 0)]))
    for t in (0, 1, 5):
        assert walk_weight_propagation(m, [5.0], t) == pytest.approx([5.0])


def test_walk_triangle_one_step():
    g = triangle_with_loops()
    out = walk_weight_propagation(transition_matrix(g), [1.0, 0.0, 0.0], 1)
    assert out == pytest.approx([1 / 3, 1 / 3, 1 / 3], abs=1e-15)


def test_walk_matches_dense_power_oracle():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(1, 11))
        g = random_graph(rng, n)
        m = transition_matrix(g)
        dense = dense_transition(g)
        w = rng.uniform(0, 3, n)
        for t in range(6):
            expected = w @ np.linalg.matrix_power(dense, t)
            got = walk_weight_propagation(m, w, t)
            assert np.abs(got - expected).max() <= 1e-12


def test_walk_rejects_bad_inputs():
    m = transition_matrix(triangle_with_loops())
    with pytest.raises(ValueError):
        walk_weight_propagation(m, [1.0, 2.0], 1)
    with pytest.raises(ValueError):
        walk_weight_propagation(m, [1.0, 2.0, 3.0], -1)


def test_mass_conservation():
    rng = np.random.default_rng(8)
    for _ in range(20):
        n = int(rng.integers(1, 11))
        g = random_graph(rng, n)
        w = rng.uniform(0, 5, n)
        for t in (0, 1, 3, 5):
            v = network_values(g, w, t)
            assert abs(v.total - w.sum()) <= 1e-9 * max(w.sum(), 1e-300)


def test_propagation_keeps_nonnegativity():
    rng = np.random.default_rng(9)
    for _ in range(20):
        n = int(rng.integers(1, 9))
        g = random_graph(rng, n)
        w = rng.uniform(0, 5, n)
        assert (network_values(g, w, 4).values >= 0).all()


def test_uniform_weights_stationary_on_regular_graph():
    # complete graph plus self-loops is regular, so uniform mass stays put
    n = 5
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    g = build_graph(n, edges, add_self_loops=True)
    w = np.full(n, 1.7)
    for t in range(6):
        assert network_values(g, w, t).values == pytest.approx(w, rel=1e-12)


def test_network_values_tags_horizon():
    g = triangle_with_loops()
    vv = network_values(g, ValuationVector([1.0, 0.0, 0.0], player="A"), 2)
    assert vv.horizon == 2
    assert vv.player == "A"


def test_valuation_vector_validation():
    with pytest.raises(ValueError):
        ValuationVector([-1.0, 2.0])
    with pytest.raises(ValueError):
        ValuationVector([1.0], player="X")


# -- file formats -----------------------------------------------------------


def test_edge_list_round_trip(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("3\n0 1\n1 2\n2 2\n")
    n, edges = read_edge_list(path)
    assert n == 3
    assert edges == [(0, 1), (1, 2), (2, 2)]
    g = load_graph(path)
    assert g.degrees.tolist() == [1, 2, 2]
    assert g.has_self_loop(2)


def test_edge_list_parse_error_mentions_line():
    path_text = "2\n0 1 junk\n"

    def check(tmp, text):
        p = tmp / "bad.txt"
        p.write_text(text)
        with pytest.raises(ValueError, match=":2:"):
            read_edge_list(p)

    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as d:
        check(Path(d), path_text)
        check(Path(d), "2\nx y\n")


def test_valuation_file_round_trip(tmp_path):
    path = tmp_path / "v.txt"
    values = np.array([0.25, 1e-12, 3.0, 123456.789])
    write_valuations(path, values)
    assert read_valuations(path) == pytest.approx(values, rel=0, abs=0)


def test_valuation_file_parse_error_mentions_line(tmp_path):
    path = tmp_path / "v.txt"
    path.write_text("1.0\nnot-a-number\n")
    with pytest.raises(ValueError, match=":2:"):
        read_valuations(path)
