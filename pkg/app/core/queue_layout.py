"""
Queue and stack layouts over a vertex ordering, and conversions between
queue layouts and track layouts.

Edges are intervals [first, last] of their endpoint positions. Two edges are
nested when one interval strictly contains the other (shared endpoints never
nest) and cross when v < x < w < y.
"""

import logging
from bisect import bisect_left
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import networkx as nx

from app.core.errors import BadParams, NoSuchLayout, NotAcyclic, NotForest, VerificationFailed
from app.core.graph_core import Colouring, Edge, Graph, VertexOrdering, lex_bfs, verify_acyclic_colouring
from app.core.report import Report
from app.core.track_layout import PROPER, TrackLayout, _numbers, verify_track_layout

log = logging.getLogger("layout.queue")

Interval = tuple[int, int, Edge]


def _key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# ── Domain types ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class QueueLayout:
    order: VertexOrdering
    queue_of: dict[Edge, int]
    queue_count: int

    @cached_property
    def queues(self) -> list[list[Edge]]:
        out: list[list[Edge]] = [[] for _ in range(self.queue_count)]
        for e, q in sorted(self.queue_of.items()):
            out[q].append(e)
        return out

    def to_dict(self) -> dict:
        return {"order": list(self.order.sequence), "queues": [[list(e) for e in q] for q in self.queues]}

    @classmethod
    def from_dict(cls, data: dict) -> "QueueLayout":
        queue_of = {_key(u, v): q for q, edges in enumerate(data["queues"]) for u, v in edges}
        return cls(VertexOrdering(tuple(data["order"])), queue_of, len(data["queues"]))


@dataclass(frozen=True)
class StackLayout:
    order: VertexOrdering
    stack_of: dict[Edge, int]

    @property
    def stack_count(self) -> int:
        return max(self.stack_of.values(), default=-1) + 1

    @cached_property
    def stacks(self) -> list[list[Edge]]:
        out: list[list[Edge]] = [[] for _ in range(self.stack_count)]
        for e, s in sorted(self.stack_of.items()):
            out[s].append(e)
        return out

    def to_dict(self) -> dict:
        return {"order": list(self.order.sequence), "stacks": [[list(e) for e in s] for s in self.stacks]}

    @classmethod
    def from_dict(cls, data: dict) -> "StackLayout":
        stack_of = {_key(u, v): s for s, edges in enumerate(data["stacks"]) for u, v in edges}
        return cls(VertexOrdering(tuple(data["order"])), stack_of)


def _intervals(edges, order: VertexOrdering) -> list[Interval]:
    pos = order.position
    out = []
    for u, v in edges:
        a, b = sorted((pos[u], pos[v]))
        out.append((a, b, _key(u, v)))
    return out


# ── Rainbows and queues ──────────────────────────────────────────────

def _nesting_depths(intervals: list[Interval]) -> tuple[list[int], list[int]]:
    """
    For intervals sorted by (left asc, right asc): depth of each in the
    longest strictly nested chain ending at it, and the chain predecessor.
    Equal lefts sort by ascending right so they never chain.
    """
    tails: list[int] = []      # -right of the innermost edge of the best chain per length
    tail_idx: list[int] = []
    depth = [0] * len(intervals)
    prev = [-1] * len(intervals)
    for i, (_, right, _) in enumerate(intervals):
        j = bisect_left(tails, -right)
        if j == len(tails):
            tails.append(-right)
            tail_idx.append(i)
        else:
            tails[j] = -right
            tail_idx[j] = i
        depth[i] = j
        prev[i] = tail_idx[j - 1] if j > 0 else -1
    return depth, prev


def max_rainbow(g: Graph, order: VertexOrdering) -> tuple[int, list[Edge]]:
    if len(order) != g.n:
        raise BadParams("ordering does not cover the graph")
    intervals = sorted(_intervals(g.edges, order))
    if not intervals:
        return 0, []
    depth, prev = _nesting_depths(intervals)
    i = max(range(len(intervals)), key=lambda j: (depth[j], -j))
    witness = []
    while i >= 0:
        witness.append(intervals[i][2])
        i = prev[i]
    witness.reverse()
    return len(witness), witness


def queues_from_ordering(g: Graph, order: VertexOrdering) -> QueueLayout:
    """Queue index = nesting depth of the edge interval; as many queues as the largest rainbow."""
    if len(order) != g.n:
        raise BadParams("ordering does not cover the graph")
    intervals = sorted(_intervals(g.edges, order))
    depth, _ = _nesting_depths(intervals)
    queue_of = {iv[2]: d for iv, d in zip(intervals, depth)}
    return QueueLayout(order, queue_of, max(depth, default=-1) + 1)


def _cover_report(report: Report, g: Graph, order: VertexOrdering, assigned: dict[Edge, int]) -> bool:
    report.check("order", len(order) == g.n, {"expected": g.n, "got": len(order)})
    missing = [list(e) for e in g.edges if e not in assigned]
    extra = [list(e) for e in assigned if not (0 <= e[0] < g.n and 0 <= e[1] < g.n and g.has_edge(*e))]
    report.check("edges", not missing and not extra, {"missing": missing[:10], "extra": extra[:10]})
    return report.ok


def verify_queue_layout(g: Graph, Q: QueueLayout) -> Report:
    report = Report("queue_layout")
    if not _cover_report(report, g, Q.order, Q.queue_of):
        return report
    bad = [list(e) for e, q in sorted(Q.queue_of.items()) if not 0 <= q < Q.queue_count]
    if not report.check("queue_index", not bad, {"queue_count": Q.queue_count, "edges": bad[:10]}):
        return report
    for q, edges in enumerate(Q.queues):
        intervals = sorted(_intervals(edges, Q.order))
        depth, prev = _nesting_depths(intervals)
        deepest = max(range(len(intervals)), key=lambda j: depth[j], default=-1)
        if deepest >= 0 and depth[deepest] > 0:
            report.check("nesting", False, {"queue": q, "edges": [list(intervals[prev[deepest]][2]),
                                                                  list(intervals[deepest][2])]})
    report.checks.setdefault("nesting", True)
    report.stats.update({"queues": Q.queue_count, "max_rainbow": max_rainbow(g, Q.order)[0]})
    if not report.ok:
        log.warning("queue layout check failed: %s", report.failed())
    return report


def _crossing_in(intervals: list[Interval]) -> Optional[tuple[Edge, Edge]]:
    """Stack sweep: closings innermost first, then openings outermost first."""
    opening: dict[int, list[Interval]] = {}
    closing: dict[int, list[Interval]] = {}
    for iv in intervals:
        opening.setdefault(iv[0], []).append(iv)
        closing.setdefault(iv[1], []).append(iv)
    stack: list[Interval] = []
    for p in sorted(set(opening) | set(closing)):
        for iv in sorted(closing.get(p, []), key=lambda iv: -iv[0]):
            if stack[-1] != iv:
                return stack[-1][2], iv[2]
            stack.pop()
        stack.extend(sorted(opening.get(p, []), key=lambda iv: -iv[1]))
    return None


def verify_stack_layout(g: Graph, S: StackLayout) -> Report:
    report = Report("stack_layout")
    if not _cover_report(report, g, S.order, S.stack_of):
        return report
    bad = [list(e) for e, s in sorted(S.stack_of.items()) if s < 0]
    if not report.check("stack_index", not bad, {"edges": bad[:10]}):
        return report
    for s, edges in enumerate(S.stacks):
        pair = _crossing_in(_intervals(edges, S.order))
        if pair is not None:
            report.check("crossing", False, {"stack": s, "edges": [list(pair[0]), list(pair[1])]})
    report.checks.setdefault("crossing", True)
    report.stats["stacks"] = S.stack_count
    if not report.ok:
        log.warning("stack layout check failed: %s", report.failed())
    return report


def stacks_from_ordering(g: Graph, order: VertexOrdering) -> StackLayout:
    """First-fit: each edge, outermost first, goes to the lowest stack it crosses nothing in."""
    pos = order.position
    stacks: list[list[tuple[int, int]]] = []
    stack_of: dict[Edge, int] = {}
    for a, b, e in sorted(_intervals(g.edges, order), key=lambda iv: (iv[0], -iv[1], iv[2])):
        for s, members in enumerate(stacks):
            if not any(x < a < y < b or a < x < b < y for x, y in members):
                members.append((a, b))
                stack_of[e] = s
                break
        else:
            stacks.append([(a, b)])
            stack_of[e] = len(stacks) - 1
    log.debug("stacks_from_ordering: n=%d stacks=%d", len(pos), len(stacks))
    return StackLayout(order, stack_of)


# ── Trees ────────────────────────────────────────────────────────────

def _require_forest(t: Graph):
    if t.n and not nx.is_forest(t.to_networkx()):
        raise NotForest("graph has a cycle")


def tree_1queue(t: Graph) -> QueueLayout:
    """Lex-BFS order per component; no two edges nest."""
    _require_forest(t)
    seq: list[int] = []
    for comp in t.components():
        sub, verts = t.subgraph(comp)
        seq.extend(verts[v] for v in lex_bfs(sub, 0).sequence)
    order = VertexOrdering(tuple(seq))
    return QueueLayout(order, {e: 0 for e in t.edges}, 1 if t.m else 0)


def tree_1stack(t: Graph) -> StackLayout:
    """Depth-first preorder per component, neighbours ascending; no two edges cross."""
    _require_forest(t)
    G = t.to_networkx()
    seq: list[int] = []
    for comp in t.components():
        seq.extend(nx.dfs_preorder_nodes(G, comp[0]))  # adjacency is ascending
    return StackLayout(VertexOrdering(tuple(seq)), {e: 0 for e in t.edges})


# ── Tracks <-> queues ────────────────────────────────────────────────

def queue_from_track(g: Graph, L: TrackLayout, numbering=None) -> QueueLayout:
    """Tracks concatenated in numbering order; queue = span, intra-track edges share one extra queue."""
    nums = _numbers(L, numbering)
    by_number = sorted(range(L.t), key=lambda i: nums[i])
    order = VertexOrdering(tuple(v for i in by_number for v in L.tracks[i]))
    where = L.track_of
    raw: dict[Edge, int] = {}
    for u, v in g.edges:
        span = abs(nums[where[u]] - nums[where[v]])
        raw[(u, v)] = span if span else -1
    used = sorted(set(raw.values()), key=lambda s: (s < 0, s))
    index = {s: i for i, s in enumerate(used)}
    Q = QueueLayout(order, {e: index[s] for e, s in raw.items()}, len(used))
    log.info("queue_from_track: tracks=%d queues=%d", L.t, Q.queue_count)
    return Q


def colouring_from_track(L: TrackLayout) -> Colouring:
    """Track index as colour; acyclic whenever L is a proper track layout."""
    if L.mode != PROPER:
        raise BadParams("improper track layout is not a colouring; apply improper_to_proper first")
    colour = [0] * L.n
    for v, i in L.track_of.items():
        colour[v] = i
    return Colouring(tuple(colour))


def track_from_queue(g: Graph, Q: QueueLayout, c: Colouring) -> TrackLayout:
    """
    Edge labels 2*queue + direction live in Z_M with M = 2q. Each bichromatic
    forest is rooted at its smallest vertex with label 0 and labels flow down
    so that every edge label is the sum of its endpoint labels. A vertex's
    track is its colour plus its labels against every other colour.
    """
    if not verify_queue_layout(g, Q).ok:
        raise BadParams("queue layout is not valid for this graph")
    colours_ok = verify_acyclic_colouring(g, c)
    if not colours_ok.ok:
        raise NotAcyclic(f"colouring is not acyclic: {colours_ok.failed()}", witness=colours_ok.witnesses)
    modulus = max(2 * Q.queue_count, 1)
    pos = Q.order.position
    colour = c.colour

    def edge_label(u: int, v: int) -> int:
        low, high = (u, v) if colour[u] < colour[v] else (v, u)
        return 2 * Q.queue_of[_key(u, v)] + (0 if pos[low] < pos[high] else 1)

    palette = sorted(set(colour))
    label: dict[tuple[int, int], dict[int, int]] = {}
    adjacency: dict[tuple[int, int], dict[int, list[int]]] = {}
    for u, v in g.edges:
        pair = tuple(sorted((colour[u], colour[v])))
        nbrs = adjacency.setdefault(pair, {})
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    for pair, nbrs in adjacency.items():
        values = label.setdefault(pair, {})
        for root in sorted(nbrs):
            if root in values:
                continue
            values[root] = 0
            frontier = [root]
            while frontier:
                x = frontier.pop()
                for y in sorted(nbrs[x]):
                    if y not in values:
                        values[y] = (edge_label(x, y) - values[x]) % modulus
                        frontier.append(y)

    def track_key(v: int) -> tuple:
        mine = colour[v]
        vector = tuple(label.get(tuple(sorted((mine, other))), {}).get(v, 0) for other in palette if other != mine)
        return (mine, vector)

    tracks: dict[tuple, list[int]] = {}
    for v in Q.order.sequence:
        tracks.setdefault(track_key(v), []).append(v)
    labels = sorted(tracks)
    L = TrackLayout(tuple(tuple(tracks[k]) for k in labels), tuple(labels))

    # every track pair must carry a single (queue, direction) label
    seen: dict[tuple, tuple[int, Edge]] = {}
    for u, v in g.edges:
        a, b = sorted((L.track_of[u], L.track_of[v]))
        lab = edge_label(u, v)
        first = seen.setdefault((a, b), (lab, (u, v)))
        if first[0] != lab:
            raise VerificationFailed("track pair carries two edge labels",
                                     witness={"tracks": [a, b], "edges": [list(first[1]), [u, v]]})
    bound = len(palette) * modulus ** max(len(palette) - 1, 0)
    log.info("track_from_queue: colours=%d queues=%d tracks=%d bound=%d", len(palette), Q.queue_count, L.t, bound)
    return L


def bipartite_roundtrip(g: Graph, A, B) -> tuple[TrackLayout, QueueLayout]:
    """
    2-track layout with tracks A, B and the matching 1-queue layout (A then B).
    Exists exactly when every component is a caterpillar.
    """
    side: dict[int, int] = {}
    for s, part in enumerate((A, B)):
        for v in part:
            if v in side or not 0 <= v < g.n:
                raise BadParams(f"vertex {v} repeated or unknown in the bipartition")
            side[int(v)] = s
    if len(side) != g.n:
        raise BadParams("bipartition does not cover the graph")
    for u, v in g.edges:
        if side[u] == side[v]:
            raise BadParams(f"edge {u}-{v} lies inside one side", witness={"edge": [u, v]})
    if g.n and not nx.is_forest(g.to_networkx()):
        raise NoSuchLayout("a graph with a cycle has no 2-track layout")

    tracks: tuple[list[int], list[int]] = ([], [])
    for comp in g.components():
        if len(comp) == 1:
            tracks[side[comp[0]]].append(comp[0])
            continue
        spine = [v for v in comp if g.degree(v) > 1] or [comp[0]]
        inner = set(spine)
        ends = [v for v in spine if sum(1 for w in g.neighbours[v] if w in inner) <= 1]
        if len(ends) != min(2, len(spine)) or any(sum(1 for w in g.neighbours[v] if w in inner) > 2 for v in spine):
            raise NoSuchLayout("component is not a caterpillar", witness={"component": comp[:10]})
        walk = [min(ends)]
        while len(walk) < len(spine):
            walk.append(next(w for w in g.neighbours[walk[-1]] if w in inner and w not in walk[-2:]))
        for s in walk:
            tracks[side[s]].append(s)
            tracks[1 - side[s]].extend(w for w in g.neighbours[s] if w not in inner)

    L = TrackLayout((tuple(tracks[0]), tuple(tracks[1])), ("A", "B"), PROPER)
    Q = QueueLayout(VertexOrdering(tuple(tracks[0] + tracks[1])), {e: 0 for e in g.edges}, 1 if g.m else 0)
    for report in (verify_track_layout(g, L), verify_queue_layout(g, Q)):
        report.raise_if_failed()
    return L, Q
