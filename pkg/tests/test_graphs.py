import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.sparse.csgraph import dijkstra

from cascadescope.graphs import (ClassReport, GenSpec, Graph, build_graph,
                                 complete_kary_tree, gen_balanced_tree,
                                 gen_planted_star_tree, gen_scaffold, is_connected,
                                 layer_start, read_graph, tree_size,
                                 validate_class, write_graph)


def test_build_graph_dedupes_and_canonicalizes():
    g = build_graph([(1, 0), (0, 1), (2, 1), (1, 2), (0, 2)], 3)
    assert g.n == 3
    assert g.edge_count == 3
    assert sorted(zip(g.edge_u.tolist(), g.edge_v.tolist())) == [(0, 1), (0, 2), (1, 2)]


def test_build_graph_rejects_self_loop():
    with pytest.raises(ValueError, match="self-loop"):
        build_graph([(0, 0), (0, 1)], 2)


def test_build_graph_rejects_out_of_range():
    with pytest.raises(ValueError):
        build_graph([(0, 3)], 3)
    with pytest.raises(ValueError):
        build_graph([(-1, 0)], 3)


def test_degrees_and_neighbors():
    g = build_graph([(0, 1), (0, 2), (0, 3)], 5)
    assert g.degree(0) == 3
    assert g.degree(4) == 0
    assert g.degrees().tolist() == [3, 1, 1, 1, 0]
    assert sorted(g.neighbors(0).tolist()) == [1, 2, 3]
    assert g.neighbors(4).tolist() == []


def test_adjacency_matrix_weights_land_on_slots():
    g = build_graph([(0, 1), (1, 2), (0, 2)], 3)
    w = np.array([10.0, 20.0, 30.0])
    m = g.adjacency_matrix(w).toarray()
    assert m.T.tolist() == m.tolist()
    for e in range(g.edge_count):
        u, v = int(g.edge_u[e]), int(g.edge_v[e])
        assert m[u, v] == w[e]


def test_is_connected():
    assert is_connected(build_graph([(0, 1), (1, 2)], 3))
    assert not is_connected(build_graph([(0, 1)], 3))


def test_validate_class_triangle_example():
    tri = build_graph([(0, 1), (1, 2), (0, 2)], 3)
    rep = validate_class(tri, 0, 1, 5)
    assert not rep.is_member
    assert len(rep.violations) == 3
    assert rep.highdeg_set == frozenset()


def test_validate_class_requires_d_below_big_d():
    tri = build_graph([(0, 1), (1, 2), (0, 2)], 3)
    with pytest.raises(ValueError):
        validate_class(tri, 0, 5, 5)


def test_validate_class_member():
    # hub of degree 3 with D=3, others degree <= 1... use star
    star = build_graph([(0, 1), (0, 2), (0, 3)], 4)
    rep = validate_class(star, 1, 1, 3)
    assert rep.is_member
    assert rep.highdeg_set == frozenset({0})
    assert rep.max_lowdeg <= 1


def test_balanced_tree_size_example():
    g = gen_balanced_tree(5, 8)
    assert g.n == 488_281
    assert g.edge_count == g.n - 1
    deg = g.degrees()
    assert deg[0] == 5
    assert int(deg.max()) == 6
    assert int((deg == 1).sum()) == 5 ** 8


def test_tree_size_and_layer_start():
    assert tree_size(2, 3) == 15
    assert tree_size(3, 2) == 13
    assert layer_start(2, 0) == 0
    assert layer_start(2, 1) == 1
    assert layer_start(2, 3) == 7
    # the next layer starts where a tree one level shallower ends
    for b in (2, 3, 5):
        for h in range(1, 5):
            assert layer_start(b, h) == tree_size(b, h - 1)


def test_planted_star_tree_examples():
    g, v = gen_planted_star_tree(2, 2, 1, 4)
    assert g.n == 8
    assert v == 1
    assert g.degree(v) == 4

    g, v = gen_planted_star_tree(3, 3, 2, 5)
    assert g.n == 41
    assert g.degree(v) == 5
    assert v == layer_start(3, 2)


def test_planted_star_tree_leaf_layer():
    # planting at the bottom layer: base degree is 1
    g, v = gen_planted_star_tree(2, 3, 3, 4)
    assert v == layer_start(2, 3)
    assert g.degree(v) == 4
    assert g.n == 15 + 3


def test_planted_star_tree_rejects_tiny_degree():
    with pytest.raises(ValueError):
        gen_planted_star_tree(3, 3, 1, 4)  # needs degree > branching+1
    with pytest.raises(ValueError):
        gen_planted_star_tree(2, 2, 0, 5)  # layer outside [1, height]


def test_scaffold_example_and_structure():
    sc = gen_scaffold(2, 1)
    assert sc.graph.n == 4
    assert sc.core.tolist() == [0, 1]
    assert sc.anchors.tolist() == [0, 1]
    assert sc.leaves.tolist() == [2, 3]

    sc = gen_scaffold(5, 3)
    g = sc.graph
    assert g.n == 5 * (3 + 1)
    # every leaf sits at unweighted distance path_len from its anchor
    dist = dijkstra(g.adjacency_matrix(), directed=False,
                    indices=sc.anchors.tolist(), unweighted=True)
    for i in range(5):
        assert dist[i, sc.leaves[i]] == 3
    assert is_connected(g)
    # leaves have degree 1, interior path vertices degree 2
    deg = g.degrees()
    assert all(deg[v] == 1 for v in sc.leaves.tolist())


def test_graph_file_round_trip(tmp_path):
    g = build_graph([(0, 1), (1, 2), (2, 3), (0, 3)], 5)
    path = tmp_path / "g.txt"
    write_graph(g, path)
    h = read_graph(path)
    assert h.n == g.n
    assert h.edge_u.tolist() == g.edge_u.tolist()
    assert h.edge_v.tolist() == g.edge_v.tolist()


def test_read_graph_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a graph\n")
    with pytest.raises(Exception):
        read_graph(path)


def test_genspec_validation():
    with pytest.raises(ValueError):
        GenSpec("no_such_kind", {})
    with pytest.raises(ValueError):
        GenSpec("balanced_tree", {"branching": 3})  # missing height
    with pytest.raises(ValueError):
        GenSpec("balanced_tree", {"branching": 3, "height": 2, "bogus": 1})
    with pytest.raises(ValueError):
        GenSpec("balanced_tree", {"branching": 3, "height": 0})


def test_genspec_builds():
    g, meta = GenSpec("balanced_tree", {"branching": 2, "height": 3}).build()
    assert g.n == 15
    g, meta = GenSpec("planted_star_tree", {"branching": 2, "height": 2,
                                            "layer": 1, "planted_degree": 4}).build()
    assert meta["planted_vertex"] == 1
    g, meta = GenSpec("h_scaffold", {"core_size": 2, "path_len": 1}).build()
    assert g.n == 4
    g, meta = GenSpec("edge_list", {"n": 3, "edges": [[0, 1], [1, 2]]}).build()
    assert g.edge_count == 2


@given(n=st.integers(2, 60), b=st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_complete_kary_tree_properties(n, b):
    g = complete_kary_tree(n, b)
    assert g.edge_count == n - 1
    assert is_connected(g)
    deg = g.degrees()
    # root has at most b children; everyone else has a parent plus <= b children
    assert deg[0] <= b
    assert int(deg.max()) <= b + 1
    # parent rule
    for child in range(1, n):
        assert (child - 1) // b in g.neighbors(child).tolist()


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_build_graph_idempotent_on_duplicates(data):
    n = data.draw(st.integers(2, 8))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
        lambda p: p[0] != p[1])
    edges = data.draw(st.lists(pairs, min_size=1, max_size=20))
    g = build_graph(edges, n)
    # doubling the list changes nothing
    h = build_graph(edges + edges, n)
    assert g.edge_count == h.edge_count == len({frozenset(e) for e in edges})
    assert g.indptr.tolist() == h.indptr.tolist()
