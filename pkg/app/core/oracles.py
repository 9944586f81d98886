"""
Exact parameters of small graphs by exhaustive search.

Every search expands vertices in ascending id and counts the nodes it visits,
so values, witnesses and explored counts are reproducible. Instance sizes are
gated by the LAYOUT_ORACLE_*_LIMIT settings.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Optional

import networkx as nx

from app.config import (
    ORACLE_PATHWIDTH_LIMIT,
    ORACLE_QUEUE_LIMIT,
    ORACLE_TRACK_LIMIT,
    ORACLE_TREEWIDTH_LIMIT,
)
from app.core.errors import TooLarge, VerificationFailed
from app.core.graph_core import Graph, PathDecomposition, TreeDecomposition, VertexOrdering
from app.core.queue_layout import _nesting_depths, queues_from_ordering, verify_queue_layout
from app.core.track_layout import TrackLayout, verify_track_layout

log = logging.getLogger("layout.oracles")


@dataclass
class OracleResult:
    kind: str
    value: int
    witness: Any
    explored: int

    def to_dict(self) -> dict:
        witness = self.witness.to_dict() if hasattr(self.witness, "to_dict") else self.witness
        return {"kind": self.kind, "value": self.value, "witness": witness, "explored": self.explored}


def _gate(g: Graph, limit: Optional[int], default: int, what: str):
    limit = default if limit is None else limit
    if g.n > limit:
        raise TooLarge(f"{what} oracle accepts at most {limit} vertices, got {g.n}", witness={"n": g.n, "limit": limit})


def _masks(g: Graph) -> list[int]:
    return [sum(1 << w for w in g.neighbours[v]) for v in range(g.n)]


# ── Queue number ─────────────────────────────────────────────────────

def _twin_rep(g: Graph) -> list[int]:
    """Smallest vertex with the same open or closed neighbourhood."""
    masks = _masks(g)
    rep = list(range(g.n))
    for v in range(g.n):
        for u in range(v):
            same_open = masks[u] == masks[v]
            same_closed = masks[u] | (1 << u) == masks[v] | (1 << v)
            if same_open or same_closed:
                rep[v] = rep[u]
                break
    return rep


def _rainbow_bound(placed_pos: dict[int, int], g: Graph) -> int:
    """
    Largest rainbow forced by a prefix: closed edges as placed, each open
    edge as an interval to a common point past the prefix.
    """
    far = len(placed_pos)
    intervals = []
    for u, v in g.edges:
        pu, pv = placed_pos.get(u), placed_pos.get(v)
        if pu is None and pv is None:
            continue
        if pu is None or pv is None:
            intervals.append((pu if pv is None else pv, far, (u, v)))
        else:
            intervals.append((min(pu, pv), max(pu, pv), (u, v)))
    if not intervals:
        return 0
    intervals.sort()
    depth, _ = _nesting_depths(intervals)
    return max(depth) + 1


def exact_queue_number(g: Graph, limit: Optional[int] = None) -> OracleResult:
    _gate(g, limit, ORACLE_QUEUE_LIMIT, "queue-number")
    if g.m == 0:
        Q = queues_from_ordering(g, VertexOrdering(tuple(range(g.n))))
        return OracleResult("queue_number", 0, Q, 1)
    rep = _twin_rep(g)
    explored = 0

    def search(seq: list[int], pos: dict[int, int], q: int) -> Optional[list[int]]:
        nonlocal explored
        explored += 1
        if len(seq) == g.n:
            return seq if rep[seq[0]] <= rep[seq[-1]] else None
        for v in range(g.n):
            if v in pos:
                continue
            # twins appear in ascending id
            if any(rep[u] == rep[v] and u not in pos for u in range(v)):
                continue
            pos[v] = len(seq)
            seq.append(v)
            if _rainbow_bound(pos, g) <= q:
                found = search(seq, pos, q)
                if found is not None:
                    return found
            seq.pop()
            del pos[v]
        return None

    q = 1
    while True:
        found = search([], {}, q)
        if found is not None:
            break
        log.debug("exact_queue_number: no %d-queue layout after %d nodes", q, explored)
        q += 1
    Q = queues_from_ordering(g, VertexOrdering(tuple(found)))
    verify_queue_layout(g, Q).raise_if_failed()
    log.info("exact_queue_number: n=%d qn=%d explored=%d", g.n, q, explored)
    return OracleResult("queue_number", Q.queue_count, Q, explored)


# ── Track number ─────────────────────────────────────────────────────

def _clique_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    return max(len(c) for c in nx.find_cliques(g.to_networkx()))


def exact_track_number(g: Graph, limit: Optional[int] = None) -> OracleResult:
    _gate(g, limit, ORACLE_TRACK_LIMIT, "track-number")
    explored = 0
    if g.n == 0:
        return OracleResult("track_number", 0, TrackLayout(()), 1)

    def crosses(tracks: list[list[int]], where: dict[int, int], v: int) -> bool:
        """Do the new edges at v X-cross any placed edge between the same tracks?"""
        pos = {x: i for t in tracks for i, x in enumerate(t)}
        tv = where[v]
        for u in g.neighbours[v]:
            if u not in where:
                continue
            tu = where[u]
            if tu == tv:
                return True
            for x in tracks[tv]:
                if x == v:
                    continue
                for y in g.neighbours[x]:
                    if y not in where or where[y] != tu or y == u:
                        continue
                    if (pos[v] - pos[x]) * (pos[u] - pos[y]) < 0:
                        return True
        return False

    def search(v: int, tracks: list[list[int]], where: dict[int, int], t: int) -> bool:
        nonlocal explored
        explored += 1
        if v == g.n:
            return True
        for ti in range(min(len(tracks) + 1, t)):
            fresh = ti == len(tracks)
            if fresh:
                tracks.append([])
            where[v] = ti
            for slot in range(len(tracks[ti]) + 1):
                tracks[ti].insert(slot, v)
                if not crosses(tracks, where, v) and search(v + 1, tracks, where, t):
                    return True
                tracks[ti].pop(slot)
            del where[v]
            if fresh:
                tracks.pop()
        return False

    t = max(_clique_number(g), 1)
    while True:
        tracks: list[list[int]] = []
        if search(0, tracks, {}, t):
            break
        log.debug("exact_track_number: no %d-track layout after %d nodes", t, explored)
        t += 1
    L = TrackLayout(tuple(tuple(tr) for tr in tracks))
    verify_track_layout(g, L).raise_if_failed()
    log.info("exact_track_number: n=%d tn=%d explored=%d", g.n, L.t, explored)
    return OracleResult("track_number", L.t, L, explored)


# ── Path-width (vertex separation) ───────────────────────────────────

def exact_pathwidth(g: Graph, limit: Optional[int] = None) -> OracleResult:
    """min over orderings of the largest prefix boundary; witness is a path-decomposition."""
    _gate(g, limit, ORACLE_PATHWIDTH_LIMIT, "path-width")
    if g.n == 0:
        return OracleResult("pathwidth", -1, PathDecomposition(()), 1)
    masks = _masks(g)
    full = (1 << g.n) - 1
    best = [0] * (1 << g.n)
    choice = [-1] * (1 << g.n)
    for S in range(1, full + 1):
        outside = full & ~S
        boundary = sum(1 for v in range(g.n) if S >> v & 1 and masks[v] & outside)
        value = None
        for v in range(g.n):
            if S >> v & 1:
                cand = best[S & ~(1 << v)]
                if value is None or cand < value:
                    value, choice[S] = cand, v
        best[S] = max(value, boundary)
    order: list[int] = []
    S = full
    while S:
        order.append(choice[S])
        S &= ~(1 << choice[S])
    order.reverse()
    pd = PathDecomposition.from_ordering(g, VertexOrdering(tuple(order))).validate(g)
    if pd.width != best[full]:
        raise VerificationFailed("path-width witness disagrees with its value",
                                 witness={"value": best[full], "width": pd.width})
    log.info("exact_pathwidth: n=%d pw=%d", g.n, best[full])
    return OracleResult("pathwidth", best[full], {"order": order, "decomposition": pd.to_dict()}, 1 << g.n)


# ── Tree-width (elimination orderings) ───────────────────────────────

def _q_set(masks: list[int], S: int, v: int) -> int:
    """Vertices outside S + v reachable from v through S."""
    seen = 1 << v
    frontier = [v]
    reach = 0
    while frontier:
        x = frontier.pop()
        nbrs = masks[x] & ~seen
        seen |= nbrs
        while nbrs:
            low = nbrs & -nbrs
            w = low.bit_length() - 1
            nbrs ^= low
            if S >> w & 1:
                frontier.append(w)
            else:
                reach |= low
    return reach


def _decomposition_from_elimination(g: Graph, order: list[int]) -> TreeDecomposition:
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(g.neighbours[v]) for v in range(g.n)]
    bags: list[frozenset[int]] = []
    later: list[set[int]] = []
    for v in order:
        up = {w for w in adj[v] if pos[w] > pos[v]}
        for a, b in combinations(up, 2):
            adj[a].add(b)
            adj[b].add(a)
        bags.append(frozenset(up | {v}))
        later.append(up)
    edges = []
    for i, v in enumerate(order[:-1]):
        nxt = min(later[i], key=lambda w: pos[w]) if later[i] else order[i + 1]
        edges.append((i, pos[nxt]))
    return TreeDecomposition(tuple(bags), tuple(edges))


def exact_treewidth(g: Graph, limit: Optional[int] = None) -> OracleResult:
    """min over elimination orderings of the largest eliminated degree."""
    _gate(g, limit, ORACLE_TREEWIDTH_LIMIT, "tree-width")
    if g.n == 0:
        return OracleResult("treewidth", -1, TreeDecomposition(()), 1)
    masks = _masks(g)
    full = (1 << g.n) - 1
    best = [0] * (1 << g.n)
    choice = [-1] * (1 << g.n)
    best[0] = -1
    for S in range(1, full + 1):
        value = None
        for v in range(g.n):
            if S >> v & 1:
                rest = S & ~(1 << v)
                cand = max(best[rest], bin(_q_set(masks, rest, v)).count("1"))
                if value is None or cand < value:
                    value, choice[S] = cand, v
        best[S] = value
    order: list[int] = []
    S = full
    while S:
        order.append(choice[S])
        S &= ~(1 << choice[S])
    order.reverse()
    td = _decomposition_from_elimination(g, order).validate(g)
    if td.width != best[full]:
        raise VerificationFailed("tree-width witness disagrees with its value",
                                 witness={"value": best[full], "width": td.width})
    log.info("exact_treewidth: n=%d tw=%d", g.n, best[full])
    return OracleResult("treewidth", best[full], {"order": order, "decomposition": td.to_dict()}, 1 << g.n)


ORACLES = {
    "queue-number": exact_queue_number,
    "track-number": exact_track_number,
    "pathwidth": exact_pathwidth,
    "treewidth": exact_treewidth,
}
