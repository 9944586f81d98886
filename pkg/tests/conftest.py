import os
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from app import config
from app.core.graph_core import Graph, VertexOrdering, generate

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", max_examples=10, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


# ── Strategies ───────────────────────────────────────────────────────

@st.composite
def trees(draw: st.DrawFn, min_n: int = 1, max_n: int = 40) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    parents = [draw(st.integers(min_value=0, max_value=v - 1)) for v in range(1, n)]
    return Graph(n, tuple((p, v) for v, p in enumerate(parents, start=1)))


@st.composite
def ktrees(draw: st.DrawFn, min_k: int = 1, max_k: int = 3, max_n: int = 60) -> Graph:
    k = draw(st.integers(min_value=min_k, max_value=max_k))
    n = draw(st.integers(min_value=k + 1, max_value=max(k + 1, max_n)))
    seed = draw(st.integers(min_value=0, max_value=10_000))
    return generate("ktree", {"k": k, "n": n}, seed)


@st.composite
def small_graphs(draw: st.DrawFn, min_n: int = 1, max_n: int = 7, connected: bool = False) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(combinations(range(n), 2))
    edges = {p for p in pairs if draw(st.booleans())}
    if connected:
        edges |= {(v - 1, v) for v in range(1, n)}
    return Graph(n, tuple(sorted(edges)))


@st.composite
def graph_and_ordering(draw: st.DrawFn, max_n: int = 9) -> tuple[Graph, VertexOrdering]:
    g = draw(small_graphs(max_n=max_n))
    perm = draw(st.permutations(range(g.n)))
    return g, VertexOrdering(tuple(perm))


# ── Fixtures ─────────────────────────────────────────────────────────

@pytest.fixture
def path5() -> Graph:
    return Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4)))


@pytest.fixture
def k4() -> Graph:
    return generate("complete", {"n": 4})


@pytest.fixture
def c4() -> Graph:
    return Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


@pytest.fixture
def temp_db(tmp_path, monkeypatch):
    from app.core import database

    monkeypatch.setattr(config, "DB_PATH", tmp_path / "layout.db")
    database.init_db()
    yield config.DB_PATH
    database.close_connection()
