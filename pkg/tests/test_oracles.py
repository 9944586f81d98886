import networkx as nx
import pytest
from hypothesis import given, settings

from app.core.errors import TooLarge
from app.core.graph_core import Graph, PathDecomposition, TreeDecomposition, generate, generate_Gk
from app.core.oracles import (
    ORACLES,
    exact_pathwidth,
    exact_queue_number,
    exact_track_number,
    exact_treewidth,
)
from app.core.queue_layout import tree_1queue, verify_queue_layout
from app.core.track_layout import tree_3track, verify_track_layout
from tests.conftest import small_graphs, trees


# --- Queue number ---

@pytest.mark.parametrize("graph, value", [
    (Graph(4, ((0, 1), (1, 2), (1, 3))), 1),
    (Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4))), 1),
    (Graph(4), 0),
])
def test_queue_number_small(graph, value):
    assert exact_queue_number(graph).value == value


def test_queue_number_k4(k4):
    result = exact_queue_number(k4)
    assert result.value == 2
    assert verify_queue_layout(k4, result.witness).ok
    assert result.explored > 0


@settings(max_examples=15)
@given(small_graphs(max_n=7))
def test_queue_witness_verifies(g):
    result = exact_queue_number(g)
    assert result.witness.queue_count == result.value
    assert verify_queue_layout(g, result.witness).ok


# --- Track number ---

def test_track_number_k4(k4):
    assert exact_track_number(k4).value == 4


def test_track_number_path():
    assert exact_track_number(generate("path", {"n": 4})).value == 2


def test_track_number_spider():
    g = generate_Gk(1)
    result = exact_track_number(g)
    assert result.value == 3
    assert verify_track_layout(g, result.witness).ok


@settings(max_examples=10)
@given(trees(min_n=1, max_n=7))
def test_tree_track_number_below_construction(t):
    assert exact_track_number(t).value <= tree_3track(t).t


def test_track_number_empty():
    assert exact_track_number(Graph(0)).value == 0


# --- Path-width and tree-width ---

def test_pathwidth_path(path5):
    result = exact_pathwidth(path5)
    assert result.value == 1
    assert sorted(result.witness["order"]) == list(range(5))


def test_pathwidth_k4(k4):
    assert exact_pathwidth(k4).value == 3


def test_pathwidth_grid():
    assert exact_pathwidth(generate("grid", {"rows": 3, "cols": 3})).value == 3


def test_widths_of_empty_graph():
    assert exact_pathwidth(Graph(0)).value == -1
    assert exact_treewidth(Graph(0)).value == -1


def test_edgeless_widths():
    assert exact_pathwidth(Graph(3)).value == 0
    assert exact_treewidth(Graph(3)).value == 0


@pytest.mark.parametrize("graph, value", [
    (Graph(5, ((0, 1), (0, 2), (2, 3), (2, 4))), 1),
    (Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3))), 2),
])
def test_treewidth_small(graph, value):
    assert exact_treewidth(graph).value == value


def test_treewidth_k5():
    assert exact_treewidth(generate("complete", {"n": 5})).value == 4


@settings(max_examples=20)
@given(small_graphs(max_n=8))
def test_width_witnesses(g):
    pw, tw = exact_pathwidth(g), exact_treewidth(g)
    assert tw.value <= pw.value
    pd = PathDecomposition(tuple(pw.witness["decomposition"]["bags"])).validate(g)
    assert pd.width == pw.value
    td_data = tw.witness["decomposition"]
    td = TreeDecomposition(tuple(td_data["bags"]), tuple(map(tuple, td_data["tree_edges"]))).validate(g)
    assert td.width == tw.value
    heuristic, _ = nx.approximation.treewidth_min_degree(g.to_networkx())
    assert tw.value <= heuristic


# --- Gates ---

@pytest.mark.parametrize("kind", sorted(ORACLES))
def test_limit_raises_too_large(kind, k4):
    with pytest.raises(TooLarge):
        ORACLES[kind](k4, limit=3)


def test_default_gate():
    with pytest.raises(TooLarge):
        exact_track_number(generate("path", {"n": 30}))


def test_result_dict(k4):
    data = exact_queue_number(k4).to_dict()
    assert data["kind"] == "queue_number"
    assert data["value"] == 2
    assert len(data["witness"]["queues"]) == 2


# --- Constructions against exact values ---

@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_constructions_dominate_exact_values(seed):
    t = generate("tree", {"n": 7}, seed)
    assert exact_queue_number(t).value <= tree_1queue(t).queue_count
    assert exact_track_number(t).value <= tree_3track(t).t
    assert exact_treewidth(t).value <= 1
