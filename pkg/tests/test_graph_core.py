import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.errors import BadParams, DisconnectedGraph, InvalidGraph, NotChordal, NotPEO
from app.core.graph_core import (
    Colouring,
    Graph,
    PathDecomposition,
    TreeDecomposition,
    VertexOrdering,
    acyclic_colouring_ktree,
    bipartition,
    complete_to_ktree,
    generate,
    generate_Gk,
    gk_order,
    gk_tree_decomposition,
    ktree_peo,
    lex_bfs,
    verify_acyclic_colouring,
)
from tests.conftest import ktrees, trees


# --- Graph value ---

def test_edges_are_normalised():
    g = Graph(3, ((2, 0), (1, 2)))
    assert g.edges == ((0, 2), (1, 2))
    assert g.neighbours[2] == (0, 1)


@pytest.mark.parametrize("edges", [((0, 0),), ((0, 1), (1, 0)), ((0, 5),)])
def test_invalid_graphs(edges):
    with pytest.raises(InvalidGraph):
        Graph(3, edges)


def test_vertex_ordering_must_be_permutation():
    with pytest.raises(BadParams):
        VertexOrdering((0, 0, 1))


# --- Orderings ---

def test_lex_bfs_path():
    order = lex_bfs(Graph(3, ((0, 1), (1, 2))), 0)
    assert order.sequence == (0, 1, 2)
    assert order.depth == (0, 1, 2)


def test_lex_bfs_star_leaves_ascending():
    star = generate("star", {"m": 3})
    assert lex_bfs(star, 0).sequence == (0, 1, 2, 3)


def test_lex_bfs_disconnected():
    with pytest.raises(DisconnectedGraph):
        lex_bfs(Graph(3, ((0, 1),)), 0)


@given(st.one_of(trees(), ktrees(max_n=40)), st.integers(min_value=0, max_value=10_000))
def test_lex_bfs_depth_and_parent_order(g, pick):
    root = pick % g.n
    order = lex_bfs(g, root)
    assert sorted(order.sequence) == list(range(g.n))
    assert order.sequence[0] == root
    distance = nx.single_source_shortest_path_length(g.to_networkx(), root)
    assert list(order.depth) == [distance[v] for v in range(g.n)]

    pos = order.position
    parent = {v: min((u for u in g.neighbours[v] if order.depth[u] == order.depth[v] - 1), key=lambda u: pos[u])
              for v in range(g.n) if v != root}
    for u, v in zip(order.sequence[1:], order.sequence[2:]):
        if order.depth[u] != order.depth[v]:
            continue
        assert pos[parent[u]] <= pos[parent[v]]
        if parent[u] == parent[v]:
            assert u < v


def test_ktree_peo_triangle():
    k, order = ktree_peo(generate("complete", {"n": 3}))
    assert k == 2
    assert len(order) == 3


def test_ktree_peo_rejects_c4(c4):
    with pytest.raises(NotChordal):
        ktree_peo(c4)


@given(trees(min_n=2))
def test_ktree_peo_trees_are_1trees(t):
    assert ktree_peo(t)[0] == 1


@given(ktrees())
def test_ktree_peo_recovers_k(g):
    k, order = ktree_peo(g)
    assert k == g.meta["params"]["k"]
    pos = order.position
    for v in order.sequence:
        back = [u for u in g.neighbours[v] if pos[u] < pos[v]]
        assert g.is_clique(back)


# --- Completion ---

def test_complete_to_ktree_no_fill_for_ktree():
    k3 = generate("complete", {"n": 3})
    _, added = complete_to_ktree(k3, TreeDecomposition((frozenset({0, 1, 2}),)))
    assert added == ()


def test_complete_to_ktree_path_becomes_triangle():
    p3 = Graph(3, ((0, 1), (1, 2)))
    h, added = complete_to_ktree(p3, TreeDecomposition((frozenset({0, 1, 2}),)))
    assert added == ((0, 2),)
    assert h.m == 3
    assert h.meta["completed_k"] == 2


def test_complete_to_ktree_adds_chord(c4):
    td = TreeDecomposition((frozenset({0, 1, 2}), frozenset({0, 2, 3})), ((0, 1),))
    h, added = complete_to_ktree(c4, td)
    assert added == ((0, 2),)
    assert ktree_peo(h)[0] == 2


# --- Colourings ---

def test_acyclic_colouring_of_k4(k4):
    k, order = ktree_peo(k4)
    c = acyclic_colouring_ktree(k4, order, k)
    assert c.colour_count == 4


def test_acyclic_colouring_rejects_bad_ordering(c4):
    with pytest.raises(NotPEO):
        acyclic_colouring_ktree(c4, VertexOrdering((0, 1, 3, 2)), 2)


@given(trees(min_n=2))
def test_trees_take_two_colours(t):
    k, order = ktree_peo(t)
    c = acyclic_colouring_ktree(t, order, k)
    assert c.colour_count == 2
    assert verify_acyclic_colouring(t, c).ok


@given(ktrees(min_k=2, max_k=2, max_n=50))
def test_greedy_colouring_of_2trees_is_acyclic(g):
    k, order = ktree_peo(g)
    c = acyclic_colouring_ktree(g, order, k)
    assert c.colour_count <= 3
    assert verify_acyclic_colouring(g, c).ok


def test_verify_acyclic_colouring_bichromatic_cycle(c4):
    report = verify_acyclic_colouring(c4, Colouring((0, 1, 0, 1)))
    assert not report.ok
    assert report.failed() == ["acyclic"]


def test_verify_acyclic_colouring_three_colours(c4):
    assert verify_acyclic_colouring(c4, Colouring((0, 1, 0, 2))).ok


def test_verify_acyclic_colouring_improper():
    report = verify_acyclic_colouring(Graph(2, ((0, 1),)), Colouring((0, 0)))
    assert "proper" in report.failed()


def test_bipartition(c4):
    a, b = bipartition(c4)
    assert a == [0, 2] and b == [1, 3] or a == [1, 3] and b == [0, 2]
    with pytest.raises(BadParams):
        bipartition(generate("complete", {"n": 3}))


# --- Decompositions ---

def test_path_decomposition_from_ordering(path5):
    pd = PathDecomposition.from_ordering(path5, VertexOrdering(tuple(range(5)))).validate(path5)
    assert pd.width == 1


# --- Generators ---

def test_generate_complete():
    g = generate("complete", {"n": 4})
    assert (g.n, g.m) == (4, 6)


def test_generate_grid():
    g = generate("grid", {"rows": 3, "cols": 3})
    assert (g.n, g.m) == (9, 12)


def test_generate_ktree_edge_count():
    g = generate("ktree", {"k": 2, "n": 10}, seed=7)
    assert g.m == 2 * 10 - 3
    assert g.is_connected()


def test_generate_is_deterministic():
    a = generate("partial_ktree", {"k": 3, "n": 40, "p": 0.6}, seed=11)
    b = generate("partial_ktree", {"k": 3, "n": 40, "p": 0.6}, seed=11)
    assert a.edges == b.edges


def test_randomized_family_needs_seed():
    with pytest.raises(BadParams):
        generate("tree", {"n": 5})


@pytest.mark.parametrize("params", [{}, {"n": -1}, {"n": "x"}])
def test_generate_bad_params(params):
    with pytest.raises(BadParams):
        generate("path", params)


def test_generate_unknown_family():
    with pytest.raises(BadParams):
        generate("hypercube", {"n": 3})


def test_caterpillar_and_bipartite_ids():
    cat = generate("caterpillar", {"m": 3, "legs": 2})
    assert cat.n == 9
    assert cat.m == 2 + 6
    bip = generate("bipartite", {"a": 3, "b": 4, "p": 1.0}, seed=1)
    assert bip.m == 12
    assert bip.meta["parts"] == [[0, 1, 2], [3, 4, 5, 6]]


@pytest.mark.parametrize("k, n", [(0, 1), (1, 7), (2, 58)])
def test_gk_orders(k, n):
    assert gk_order(k) == n
    assert generate_Gk(k).n == n


def test_gk_tree_decomposition_is_valid():
    g = generate_Gk(2)
    td = gk_tree_decomposition(2).validate(g)
    assert td.width == 2
