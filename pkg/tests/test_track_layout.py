import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.errors import BadParams, InconsistentOrder, NotAClique, NotForest, NotKTree, NotSameCover
from app.core.graph_core import Graph, PathDecomposition, VertexOrdering, generate, generate_Gk
from app.core.track_layout import (
    IMPROPER,
    TrackLayout,
    balance,
    clique_partition_bound,
    covered_tracks,
    from_path_decomposition,
    from_tree_partition,
    gk_layout,
    gk_track_count,
    grid_3track,
    improper_to_proper,
    ktree_track_layout,
    max_span,
    nice_clique_partition,
    nice_order,
    s_bound,
    t_bound,
    tree_3track,
    verify_track_layout,
    wrap,
)
from app.core.tree_partition import build_tree_partition
from tests.conftest import ktrees, trees


def _singletons(n: int) -> TrackLayout:
    return TrackLayout(tuple((v,) for v in range(n)))


def _disjoint_union(*parts: Graph) -> Graph:
    edges: list[tuple[int, int]] = []
    offset = 0
    for part in parts:
        edges.extend((u + offset, v + offset) for u, v in part.edges)
        offset += part.n
    return Graph(offset, tuple(edges))


# --- Bounds ---

@pytest.mark.parametrize("k, t", [(0, 1), (1, 3), (2, 54)])
def test_t_bound(k, t):
    assert t_bound(k) == t


def test_s_bound():
    assert (s_bound(0), s_bound(1)) == (1, 6)


def test_gk_track_count():
    assert [gk_track_count(k) for k in range(4)] == [1, 3, 6, 10]


def test_clique_partition_bound():
    assert clique_partition_bound(3, 2) == 6


# --- Verification ---

def test_single_edge_on_two_tracks():
    g = Graph(2, ((0, 1),))
    report = verify_track_layout(g, _singletons(2))
    assert report.ok
    assert report.stats["max_span"] == 1


def test_x_crossing_detected():
    g = Graph(4, ((0, 2), (1, 3)))
    report = verify_track_layout(g, TrackLayout(((0, 1), (3, 2))))
    assert report.failed() == ["x_crossing"]
    assert sorted(map(sorted, report.witnesses["x_crossing"]["edges"])) == [[0, 2], [1, 3]]


def test_intra_track_edges():
    g = Graph(3, ((0, 1), (0, 2)))
    assert verify_track_layout(g, TrackLayout(((0, 1, 2),))).failed() == ["mode"]
    improper = TrackLayout(((1, 0, 2),), mode=IMPROPER)
    assert verify_track_layout(g, improper).ok
    skipping = TrackLayout(((0, 1, 2),), mode=IMPROPER)
    assert verify_track_layout(g, skipping).failed() == ["mode"]


def test_cover_failures():
    g = Graph(3, ((0, 1),))
    assert verify_track_layout(g, TrackLayout(((0,), (1,)))).failed() == ["cover"]
    assert verify_track_layout(g, TrackLayout(((0, 1), (1, 2)))).failed() == ["cover"]


def test_max_span(k4):
    assert max_span(Graph(2, ((0, 1),)), _singletons(2)) == 1
    assert max_span(k4, _singletons(4)) == 3
    assert max_span(k4, _singletons(4), numbering=[2, 1, 3, 4]) == 3
    with pytest.raises(BadParams):
        max_span(k4, _singletons(4), numbering=[1, 1, 2, 3])


# --- Trees ---

def test_star_uses_two_tracks():
    star = generate("star", {"m": 3})
    L = tree_3track(star)
    assert L.t == 2
    assert verify_track_layout(star, L).ok


def test_path_uses_three_tracks():
    p7 = generate("path", {"n": 7})
    L = tree_3track(p7)
    assert L.t == 3
    assert verify_track_layout(p7, L).ok


@given(trees())
def test_tree_3track_tracks_are_depth_mod_3(t):
    L = tree_3track(t)
    assert L.t <= 3
    assert verify_track_layout(t, L).ok


def test_tree_3track_rejects_cycles(c4):
    with pytest.raises(NotForest):
        tree_3track(c4)


def test_tree_3track_empty_graph():
    L = tree_3track(Graph(0))
    assert L.t == 0
    assert verify_track_layout(Graph(0), L).ok


# --- Path decompositions ---

def test_path_decomposition_of_p4():
    p4 = generate("path", {"n": 4})
    pd = PathDecomposition((frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})))
    L = from_path_decomposition(p4, pd)
    assert L.t == 2
    assert verify_track_layout(p4, L).ok


def test_path_decomposition_of_triangle():
    k3 = generate("complete", {"n": 3})
    assert from_path_decomposition(k3, PathDecomposition((frozenset({0, 1, 2}),))).t == 3


def test_interval_graph_takes_its_colour_count():
    # vertex 4 spans every bag; the third bag holds four vertices
    bags = (frozenset({0, 1, 4}), frozenset({1, 2, 4}), frozenset({1, 2, 3, 4}), frozenset({2, 3, 4}))
    edges = [(a, b) for a in range(5) for b in range(a + 1, 5)
             if any(a in bag and b in bag for bag in bags)]
    g = Graph(5, tuple(edges))
    L = from_path_decomposition(g, PathDecomposition(bags))
    assert L.t == 4
    assert verify_track_layout(g, L).ok


# --- Tree-partitions ---

def test_from_tree_partition_path(path5):
    L = from_tree_partition(path5, build_tree_partition(path5, 1, root=0))
    assert L.t <= 3
    assert verify_track_layout(path5, L).ok


def test_from_tree_partition_star():
    star = generate("star", {"m": 5})
    L = from_tree_partition(star, build_tree_partition(star, 1))
    assert L.t <= 3
    assert verify_track_layout(star, L).ok


@given(ktrees(min_k=2, max_k=2))
def test_from_tree_partition_2trees(g):
    tp = build_tree_partition(g, 2)
    L = from_tree_partition(g, tp)
    assert L.t <= 3 * tp.width
    assert verify_track_layout(g, L).ok


# --- Wrapping ---

@pytest.mark.parametrize("rows, cols", [(1, 6), (2, 2), (3, 3), (10, 10)])
def test_grid_3track(rows, cols):
    g = generate("grid", {"rows": rows, "cols": cols})
    L = grid_3track(rows, cols)
    assert L.t <= 3
    assert verify_track_layout(g, L).ok


def test_wrap_leaves_small_layouts():
    g = Graph(2, ((0, 1),))
    L = _singletons(2)
    assert wrap(g, L) is L


def test_wrap_of_exact_depth_layers_matches_tree_3track():
    p9 = generate("path", {"n": 9})
    layers = TrackLayout(tuple((v,) for v in range(9)))
    wrapped = wrap(p9, layers)
    assert wrapped.t == 3
    assert wrapped.tracks == tree_3track(p9).tracks


@given(trees(min_n=2, max_n=30), st.permutations(range(30)))
def test_wrap_bound(t, perm):
    L = from_path_decomposition(t, PathDecomposition.from_ordering(t, _ordering(t, perm)))
    span = max_span(t, L)
    wrapped = wrap(t, L)
    assert wrapped.t <= 2 * span + 1
    assert verify_track_layout(t, wrapped).ok


def _ordering(t: Graph, perm) -> VertexOrdering:
    return VertexOrdering(tuple(v for v in perm if v < t.n))


# --- Balancing ---

def test_balance_single_track():
    L = TrackLayout((tuple(range(10)),))
    balanced = balance(L, 5)
    assert balanced.t == 5
    assert all(len(t) == 2 for t in balanced.tracks)


def test_balance_identity():
    L = _singletons(4)
    assert balance(L, 3) is L
    assert balance(L, Fraction(7, 2)) is L


@pytest.mark.parametrize("t_prime", [0, -2, "x"])
def test_balance_rejects_bad_t_prime(t_prime):
    with pytest.raises(BadParams):
        balance(_singletons(3), t_prime)


@given(trees(min_n=1, max_n=60), st.integers(min_value=1, max_value=60))
def test_balance_bounds(t, t_prime):
    L = tree_3track(t)
    balanced = balance(L, t_prime)
    assert balanced.t <= math.floor(L.t + t_prime)
    assert max(len(tr) for tr in balanced.tracks) <= math.ceil(t.n / t_prime)
    assert verify_track_layout(t, balanced).ok


@given(trees(min_n=1, max_n=60), st.integers(min_value=1, max_value=60))
def test_balance_keeps_order_within_tracks(t, t_prime):
    L = tree_3track(t)
    balanced = balance(L, t_prime)
    for track in L.tracks:
        for u, v in zip(track, track[1:]):
            a, b = balanced.track_of[u], balanced.track_of[v]
            assert (a, balanced.position[u]) < (b, balanced.position[v])
    for block in balanced.tracks:
        assert len({L.track_of[v] for v in block}) == 1


# --- Improper layouts ---

def test_improper_to_proper_single_edge():
    g = Graph(2, ((0, 1),))
    proper = improper_to_proper(TrackLayout(((0, 1),), mode=IMPROPER))
    assert proper.t == 2
    assert verify_track_layout(g, proper).ok


def test_improper_to_proper_keeps_proper_layouts():
    L = _singletons(3)
    assert improper_to_proper(L) is L


def test_improper_caterpillar_spine():
    cat = generate("caterpillar", {"m": 4, "legs": 1})
    # spine on one improper track, legs on a second
    L = TrackLayout(((0, 1, 2, 3), (4, 5, 6, 7)), mode=IMPROPER)
    assert verify_track_layout(cat, L).ok
    proper = improper_to_proper(L)
    assert proper.t <= 2 * L.t
    assert verify_track_layout(cat, proper).ok


# --- Cliques ---

def test_covered_tracks(k4):
    L = _singletons(4)
    assert covered_tracks([0], L, k4) == frozenset({1})
    assert len(covered_tracks([0, 1, 2], L, k4)) == 3
    with pytest.raises(NotAClique):
        covered_tracks([0, 1], L, Graph(4))


def test_nice_order_left_clique_first():
    L = TrackLayout(((0, 2), (1, 3)))
    assert nice_order([(2, 3), (0, 1)], L) == [1, 0]


def test_nice_order_shared_vertex():
    L = TrackLayout(((0,), (1, 2)))
    assert nice_order([(0, 2), (0, 1)], L) == [1, 0]


def test_nice_order_inconsistent():
    L = TrackLayout(((0, 2), (3, 1)))
    with pytest.raises(InconsistentOrder):
        nice_order([(0, 1), (2, 3)], L)


def test_nice_order_needs_same_cover():
    L = _singletons(3)
    with pytest.raises(NotSameCover):
        nice_order([(0, 1), (1, 2)], L)


def test_nice_clique_partition_groups_by_cover():
    L = TrackLayout(((0, 2), (1, 3), (4,)))
    groups = nice_clique_partition([(2, 3), (4,), (0, 1)], L)
    assert sorted(groups) == [[1], [2, 0]]


# --- k-trees ---

def test_ktree_layout_edgeless():
    assert ktree_track_layout(Graph(5), 0).t == 1


def test_ktree_layout_rejects_edges_at_k0():
    with pytest.raises(NotKTree):
        ktree_track_layout(Graph(2, ((0, 1),)), 0)


@given(trees(min_n=2))
def test_ktree_layout_trees(t):
    L = ktree_track_layout(t, 1)
    assert L.t <= 3
    assert verify_track_layout(t, L).ok


def test_ktree_layout_forest_of_two_edges():
    g = Graph(4, ((0, 1), (2, 3)))
    L = ktree_track_layout(g, 1)
    assert L.t == 2
    assert verify_track_layout(g, L).ok


@given(trees(max_n=20), trees(max_n=20), trees(max_n=20))
def test_ktree_layout_forests(a, b, c):
    g = _disjoint_union(a, b, c)
    L = ktree_track_layout(g, 1)
    assert L.t <= 3
    assert verify_track_layout(g, L).ok


@given(ktrees(min_k=2, max_k=2, max_n=40), ktrees(min_k=2, max_k=2, max_n=40))
def test_ktree_layout_disconnected_2trees(a, b):
    g = _disjoint_union(a, b, Graph(1))
    L = ktree_track_layout(g, 2)
    assert L.t <= 54
    assert verify_track_layout(g, L).ok


@given(ktrees(min_k=2, max_k=2, max_n=120))
def test_ktree_layout_2trees(g):
    L = ktree_track_layout(g, 2)
    assert L.t <= 54
    assert verify_track_layout(g, L).ok


@given(ktrees(min_k=3, max_k=3, max_n=60))
def test_ktree_layout_3trees(g):
    L = ktree_track_layout(g, 3)
    assert L.t <= t_bound(3)
    assert verify_track_layout(g, L).ok


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_ktree_layout_2trees_at_scale(seed):
    g = generate("ktree", {"k": 2, "n": 1000}, seed)
    L = ktree_track_layout(g, 2)
    report = verify_track_layout(g, L)
    assert L.t <= 54
    assert report.ok


# --- Families ---

@pytest.mark.parametrize("k, tracks, n", [(0, 1, 1), (1, 3, 7), (2, 6, 58)])
def test_gk_layout(k, tracks, n):
    L = gk_layout(k)
    assert (L.t, L.n) == (tracks, n)
    assert verify_track_layout(generate_Gk(k), L).ok


def test_layout_dict_roundtrip():
    L = TrackLayout(((0, 1), (2,)), mode=IMPROPER)
    assert TrackLayout.from_dict(L.to_dict()) == L
