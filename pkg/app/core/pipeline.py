"""
Command bodies shared by the CLI and the HTTP service.

Each step takes an Envelope, builds one artifact, runs that artifact's
verifier, and returns a new Envelope carrying the artifact and the report
digest. A failing self-check raises VerificationFailed.
"""

import logging
from typing import Any, Optional, Union

import networkx as nx

from app.config import ORACLE_PATHWIDTH_LIMIT
from app.core import drawing3d, queue_layout, track_layout
from app.core.drawing3d import Drawing3D, edge_bound, verify_drawing
from app.core.errors import BadParams, NotChordal, NotKTree
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
    ktree_peo,
    lex_bfs,
    verify_acyclic_colouring,
)
from app.core.oracles import ORACLES, OracleResult, exact_pathwidth
from app.core.queue_layout import (
    QueueLayout,
    colouring_from_track,
    queue_from_track,
    queues_from_ordering,
    stacks_from_ordering,
    tree_1queue,
    tree_1stack,
    track_from_queue,
    verify_queue_layout,
    verify_stack_layout,
)
from app.core.report import Report
from app.core.schemas import Envelope, GraphModel, require
from app.core.track_layout import (
    TrackLayout,
    from_path_decomposition,
    from_tree_partition,
    ktree_track_layout,
    max_span,
    t_bound,
    verify_track_layout,
)
from app.core.tree_partition import build_tree_partition, verify_tree_partition

log = logging.getLogger("layout.pipeline")

TRACK_METHODS = ("auto", "tree", "ktree", "path", "partition", "grid", "gk", "queue", "drawing")
QUEUE_METHODS = ("auto", "track", "tree", "ordering", "bipartite")
DRAW_METHODS = ("moment", "cohen", "track", "balanced", "aspect")
VERIFY_KINDS = ("track", "queue", "stack", "partition", "drawing", "colouring")


# ── Helpers ──────────────────────────────────────────────────────────

def _is_forest(g: Graph) -> bool:
    return g.n == 0 or nx.is_forest(g.to_networkx())


def bfs_ordering(g: Graph) -> VertexOrdering:
    """Breadth-first order per component, components by smallest vertex."""
    seq: list[int] = []
    for comp in g.components():
        sub, verts = g.subgraph(comp)
        seq.extend(verts[v] for v in lex_bfs(sub, 0).sequence)
    return VertexOrdering(tuple(seq))


def chordal_width(g: Graph) -> int:
    """Largest back-clique over the components; raises NotChordal."""
    k = 0
    for comp in g.components():
        sub, _ = g.subgraph(comp)
        k = max(k, ktree_peo(sub)[0])
    return k


def graph_k(g: Graph) -> Optional[int]:
    """k recorded by the generator or the completion, if any."""
    params = g.meta.get("params") or {}
    if "completed_k" in g.meta:
        return int(g.meta["completed_k"])
    if g.meta.get("family") in ("ktree", "gk") and "k" in params:
        return int(params["k"])
    if g.meta.get("family") in ("tree", "path", "star", "caterpillar"):
        return 1
    return None


def _completion(g: Graph) -> tuple[Graph, int]:
    """A chordal supergraph from the min-degree tree-decomposition heuristic."""
    width, T = nx.approximation.treewidth_min_degree(g.to_networkx())
    nodes = sorted(T.nodes(), key=lambda bag: sorted(bag))
    index = {bag: i for i, bag in enumerate(nodes)}
    td = TreeDecomposition(tuple(nodes), tuple(sorted((index[a], index[b]) for a, b in T.edges())))
    h, added = complete_to_ktree(g, td)
    log.info("completion: heuristic width %d, %d fill edges", width, len(added))
    return h, chordal_width(h)


def _attach(env: Envelope, name: str, artifact, report: Report) -> Envelope:
    report.raise_if_failed()
    return env.with_artifact(name, artifact, report)


def _acyclic_colouring(g: Graph, env: Envelope):
    if env.colouring is not None:
        return env.colouring.build()
    if env.track_layout is not None and env.track_layout.mode == "proper":
        return colouring_from_track(env.track_layout.build())
    try:
        ordered = [ktree_peo(g.subgraph(c)[0]) for c in g.components()]
    except NotChordal as exc:
        raise BadParams("need a colouring or a proper track layout for a non-chordal graph") from exc
    colour = [0] * g.n
    for comp, (k, order) in zip(g.components(), ordered):
        sub, verts = g.subgraph(comp)
        local = acyclic_colouring_ktree(sub, order, k)
        for v, c in enumerate(local.colour):
            colour[verts[v]] = c
    return Colouring(tuple(colour))


# ── Generate ─────────────────────────────────────────────────────────

def generate_envelope(family: str, params: Optional[dict] = None, seed: Optional[int] = None) -> Envelope:
    g = generate(family, params, seed)
    log.info("generate: family=%s n=%d m=%d seed=%s", family, g.n, g.m, seed)
    return Envelope(kind="graph", graph=GraphModel(**g.to_dict()))


# ── Layouts ──────────────────────────────────────────────────────────

def layout_track(env: Envelope, method: str = "auto", k: Optional[int] = None,
                 balance: Optional[str] = None, wrap: bool = False, proper: bool = False) -> Envelope:
    g = env.graph.build()
    if method not in TRACK_METHODS:
        raise BadParams(f"unknown track method '{method}'")
    params = g.meta.get("params") or {}

    if method == "auto":
        if _is_forest(g):
            L = track_layout.tree_3track(g)
        else:
            try:
                h, kk = g, chordal_width(g)
            except NotChordal:
                h, kk = _completion(g)
            L = ktree_track_layout(h, kk if k is None else max(k, kk))
    elif method == "tree":
        L = track_layout.tree_3track(g)
    elif method == "ktree":
        try:
            kk = chordal_width(g) if k is None else k
        except NotChordal as exc:
            raise NotKTree(f"graph is not chordal: {exc}", witness=exc.witness) from exc
        L = ktree_track_layout(g, kk)
    elif method == "path":
        if g.n <= ORACLE_PATHWIDTH_LIMIT:
            pd = exact_pathwidth(g).witness["decomposition"]
            decomposition = PathDecomposition(tuple(frozenset(b) for b in pd["bags"]))
        else:
            decomposition = PathDecomposition.from_ordering(g, bfs_ordering(g))
        L = from_path_decomposition(g, decomposition)
    elif method == "partition":
        try:
            kk = chordal_width(g) if k is None else k
        except NotChordal as exc:
            raise NotKTree(f"graph is not chordal: {exc}", witness=exc.witness) from exc
        tp = build_tree_partition(g, kk)
        verify_tree_partition(g, tp, kk).raise_if_failed()
        env = env.with_artifact("tree_partition", tp)
        L = from_tree_partition(g, tp)
    elif method == "grid":
        if "rows" not in params or "cols" not in params:
            raise BadParams("grid method needs a generated grid (rows, cols)")
        L = track_layout.grid_3track(int(params["rows"]), int(params["cols"]))
    elif method == "gk":
        if "k" not in params or g.meta.get("family") != "gk":
            raise BadParams("gk method needs a generated G_k")
        L = track_layout.gk_layout(int(params["k"]))
    elif method == "queue":
        L = track_from_queue(g, require(env, "queue_layout"), _acyclic_colouring(g, env))
    else:
        L = drawing3d.track_from_drawing(g, require(env, "drawing"))

    if wrap:
        L = track_layout.wrap(g, L)
    if balance is not None:
        L = track_layout.balance(L, balance)
    if proper:
        L = track_layout.improper_to_proper(L)
    report = verify_track_layout(g, L)
    log.info("layout track: method=%s tracks=%d span=%d", method, L.t, report.stats.get("max_span", 0))
    return _attach(env, "track_layout", L, report)


def layout_queue(env: Envelope, method: str = "auto") -> Envelope:
    g = env.graph.build()
    if method not in QUEUE_METHODS:
        raise BadParams(f"unknown queue method '{method}'")
    if method == "auto":
        if env.track_layout is not None:
            method = "track"
        elif _is_forest(g):
            method = "tree"
        else:
            method = "ordering"
    if method == "track":
        Q = queue_from_track(g, require(env, "track_layout"))
    elif method == "tree":
        Q = tree_1queue(g)
    elif method == "ordering":
        Q = queues_from_ordering(g, bfs_ordering(g))
    else:
        parts = g.meta.get("parts")
        if parts is None:
            parts = bipartition(g)
        L, Q = queue_layout.bipartite_roundtrip(g, parts[0], parts[1])
        env = env.with_artifact("track_layout", L, verify_track_layout(g, L))
    return _attach(env, "queue_layout", Q, verify_queue_layout(g, Q))


def layout_stack(env: Envelope) -> Envelope:
    g = env.graph.build()
    if _is_forest(g):
        S = tree_1stack(g)
    else:
        order = env.queue_layout.build().order if env.queue_layout is not None else bfs_ordering(g)
        S = stacks_from_ordering(g, order)
    return _attach(env, "stack_layout", S, verify_stack_layout(g, S))


def colour(env: Envelope) -> Envelope:
    g = env.graph.build()
    c = _acyclic_colouring(g, env)
    return _attach(env, "colouring", c, verify_acyclic_colouring(g, c))


# ── Drawings ─────────────────────────────────────────────────────────

def _track_input(env: Envelope) -> TrackLayout:
    if env.track_layout is not None:
        return env.track_layout.build()
    return require(layout_track(env), "track_layout")


def draw(env: Envelope, method: str, r: Optional[Union[int, str]] = None) -> Envelope:
    g = env.graph.build()
    if method == "moment":
        d = drawing3d.moment_curve(g)
    elif method == "cohen":
        d = drawing3d.cohen_mod_p(g)
    elif method == "track":
        d = drawing3d.draw_from_track(g, _track_input(env))
    elif method == "balanced":
        d = drawing3d.draw_balanced(g, _track_input(env))
    elif method == "aspect":
        if r is None:
            raise BadParams("draw aspect needs r")
        d = drawing3d.draw_aspect(g, _track_input(env), r)
    else:
        raise BadParams(f"unknown drawing method '{method}'")
    report = verify_drawing(g, d)
    log.info("draw: method=%s frame=%s crossings=%s", method, list(d.frame), report.stats.get("crossings"))
    return _attach(env, "drawing", d, report)


# ── Verify / oracle ──────────────────────────────────────────────────

def verify(env: Envelope, kind: str, k: Optional[int] = None) -> Report:
    g = env.graph.build()
    if kind == "track":
        return verify_track_layout(g, require(env, "track_layout"))
    if kind == "queue":
        return verify_queue_layout(g, require(env, "queue_layout"))
    if kind == "stack":
        return verify_stack_layout(g, require(env, "stack_layout"))
    if kind == "partition":
        kk = k if k is not None else graph_k(g)
        if kk is None:
            kk = chordal_width(g)
        return verify_tree_partition(g, require(env, "tree_partition"), kk)
    if kind == "drawing":
        return verify_drawing(g, require(env, "drawing"))
    if kind == "colouring":
        return verify_acyclic_colouring(g, require(env, "colouring"))
    raise BadParams(f"unknown artifact kind '{kind}'")


def oracle(env: Envelope, kind: str, limit: Optional[int] = None) -> OracleResult:
    if kind not in ORACLES:
        raise BadParams(f"unknown oracle '{kind}'")
    return ORACLES[kind](env.graph.build(), limit=limit)


# ── Stats ────────────────────────────────────────────────────────────

def bounds_report(g: Graph, L: Optional[TrackLayout] = None, Q: Optional[QueueLayout] = None,
                  d: Optional[Drawing3D] = None, k: Optional[int] = None,
                  colouring=None) -> dict[str, Optional[bool]]:
    """Published parameter relations evaluated on what is known; None where not applicable."""
    out: dict[str, Optional[bool]] = dict.fromkeys(
        ["tn_le_t_k", "qn_le_tn_minus_1", "tracks_le_pw_plus_1", "track_from_queue_le_bound",
         "drawing_box_ok", "edge_bound_ok"])
    if L is not None and k is not None:
        out["tn_le_t_k"] = L.t <= t_bound(k)
    if L is not None and Q is not None:
        out["qn_le_tn_minus_1"] = Q.queue_count <= max(L.t - 1, 0) + (1 if L.mode == "improper" else 0)
    if 0 < g.n <= min(ORACLE_PATHWIDTH_LIMIT, 10):
        result = exact_pathwidth(g)
        pd = PathDecomposition(tuple(frozenset(b) for b in result.witness["decomposition"]["bags"]))
        out["tracks_le_pw_plus_1"] = from_path_decomposition(g, pd).t <= result.value + 1
    if Q is not None and colouring is not None and g.m:
        refined = track_from_queue(g, Q, colouring)
        c = len(set(colouring.colour))
        out["track_from_queue_le_bound"] = refined.t <= c * (2 * Q.queue_count) ** (c - 1)
    if d is not None:
        box = d.box()
        out["drawing_box_ok"] = all(b <= f for b, f in zip(box, d.frame))
        out["edge_bound_ok"] = g.m <= edge_bound(box)
    return out


def stats_row(env: Envelope) -> dict[str, Any]:
    """One CSV row: sizes, layout parameters, drawing box and bound checks."""
    g = env.graph.build()
    L = env.track_layout.build() if env.track_layout is not None else None
    Q = env.queue_layout.build() if env.queue_layout is not None else None
    S = env.stack_layout.build() if env.stack_layout is not None else None
    d = env.drawing.build() if env.drawing is not None else None
    c = env.colouring.build() if env.colouring is not None else None
    k = graph_k(g)
    row: dict[str, Any] = {
        "family": g.meta.get("family", ""),
        "n": g.n,
        "m": g.m,
        "seed": g.meta.get("seed"),
        "k": k,
        "tracks": L.t if L else None,
        "queues": Q.queue_count if Q else None,
        "max_span": max_span(g, L) if L else None,
        "stacks": S.stack_count if S else None,
    }
    if d is not None:
        report = verify_drawing(g, d)
        box = d.box()
        row.update({"box_x": box[0], "box_y": box[1], "box_z": box[2], "volume": d.volume,
                    "aspect_ratio": str(d.aspect_ratio), "crossings": report.stats.get("crossings")})
    row.update(bounds_report(g, L, Q, d, k, c))
    row["verified"] = all(r.ok for r in env.reports.values())
    return row
