import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctqwloc.graph import (
    UNREACHABLE,
    DegenerateGraphError,
    GraphError,
    build_graph,
    connected_components,
    disjoint_union,
    geodesic_distance,
    hamiltonian,
    is_connected,
    local_clustering,
    mean_clustering,
)
from ctqwloc.netgen import recursive_triangle, ring
from ctqwloc.spectral import eig_sym


def test_triangle_degrees(k3):
    assert k3.n_edges == 3
    assert k3.degrees.tolist() == [2, 2, 2]


def test_empty_dyad():
    g = build_graph(2, [])
    assert g.n_edges == 0
    assert g.degrees.tolist() == [0, 0]


def test_d1_edge_count(d1):
    assert d1.n_edges == 9


@pytest.mark.parametrize(
    "n, edges",
    [
        (3, [(1, 4)]),
        (3, [(0, 1)]),
        (3, [(1, 2), (2, 1)]),
        (3, [(1, 2), (1, 2)]),
        (3, [(2, 2)]),
    ],
)
def test_build_graph_rejects(n, edges):
    with pytest.raises(GraphError):
        build_graph(n, edges)


def test_self_edge_with_flag():
    g = build_graph(2, [(1, 1), (1, 2)], allow_self_edges=True)
    assert g.adjacency[0, 0] == 1
    assert g.degrees.tolist() == [2, 1]
    h = hamiltonian(g).matrix
    # L_11 = k_1 - a_11 = 1, scaled by 1/k_1
    assert h[0, 0] == pytest.approx(0.5)
    assert h[1, 1] == pytest.approx(1.0)


def test_adjacency_symmetric_and_readonly(d1):
    a = d1.adjacency
    assert np.array_equal(a, a.T)
    with pytest.raises(ValueError):
        a[0, 1] = 0


def test_hamiltonian_k3(k3):
    h = hamiltonian(k3).matrix
    expected = np.eye(3) - (np.ones((3, 3)) - np.eye(3)) / 2
    assert np.allclose(h, expected, atol=1e-15)
    assert np.allclose(eig_sym(h).eigenvalues, [0, 1.5, 1.5], atol=1e-12)


def test_hamiltonian_path2(path2):
    h = hamiltonian(path2).matrix
    assert np.array_equal(h, [[1, -1], [-1, 1]])


def test_hamiltonian_zero_degree_names_node():
    g = build_graph(3, [(1, 2)])
    with pytest.raises(DegenerateGraphError, match="node 3") as info:
        hamiltonian(g)
    assert info.value.node == 3


def test_hamiltonian_exactly_symmetric(small_graphs):
    for g in small_graphs:
        h = hamiltonian(g).matrix
        assert np.array_equal(h, h.T)


edge_sets = st.integers(2, 14).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda e: e[0] < e[1]), max_size=n * (n - 1) // 2),
    )
)


@settings(max_examples=100, deadline=None)
@given(edge_sets)
def test_hamiltonian_properties(case):
    n, edges = case
    g = build_graph(n, edges)
    if np.any(g.degrees == 0):
        with pytest.raises(DegenerateGraphError):
            hamiltonian(g)
        return
    h = hamiltonian(g).matrix
    assert np.array_equal(np.diag(h), np.ones(n))
    assert np.max(np.abs(h @ np.sqrt(g.degrees))) <= 1e-12
    lam = np.linalg.eigvalsh(h)
    assert lam.min() >= -1e-10 and lam.max() <= 2 + 1e-10


def test_zero_multiplicity_counts_components():
    parts = [ring(5), build_graph(2, [(1, 2)]), recursive_triangle(2)[0], ring(3)]
    for k in range(1, len(parts) + 1):
        g = disjoint_union(*parts[:k])
        lam = eig_sym(hamiltonian(g)).eigenvalues
        assert np.sum(np.abs(lam) <= 1e-10) == k == len(connected_components(g))


def test_local_clustering(k3):
    assert all(local_clustering(k3, i) == 1.0 for i in k3.labels)
    star = build_graph(4, [(1, 2), (1, 3), (1, 4)])
    assert local_clustering(star, 1) == 0.0
    assert local_clustering(star, 2) == 0.0  # degree 1 convention


@pytest.mark.parametrize("d, expected", [(1, 0.75), (2, 17 / 24), (3, 16.75 / 24)])
def test_mean_clustering_triangle_networks(d, expected):
    g = recursive_triangle(d)[0]
    assert mean_clustering(g) == pytest.approx(expected, abs=1e-12)


def test_mean_clustering_matches_networkx(small_graphs):
    for g in small_graphs:
        ref = nx.Graph()
        ref.add_nodes_from(g.labels)
        ref.add_edges_from(g.edge_labels())
        assert mean_clustering(g) == pytest.approx(nx.average_clustering(ref), abs=1e-12)


def test_triangle_free_clustering_is_zero():
    assert mean_clustering(ring(10)) == 0.0
    cube = build_graph(8, [(1, 2), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 8), (8, 5), (1, 5), (2, 6), (3, 7), (4, 8)])
    assert mean_clustering(cube) == 0.0


def test_geodesic_distance():
    r = ring(10)
    assert geodesic_distance(r, 1, 6) == 5
    assert geodesic_distance(r, 3, 3) == 0
    for i in r.labels:
        for j in r.labels:
            assert geodesic_distance(r, i, j) == min(abs(i - j), 10 - abs(i - j))
    assert geodesic_distance(build_graph(2, []), 1, 2) == UNREACHABLE


def test_is_connected(k3):
    assert is_connected(k3)
    assert not is_connected(build_graph(2, []))
