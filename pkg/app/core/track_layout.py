"""
Track layouts: constructions, transformations and verification.

A track is an ordered vertex set; a track layout assigns every vertex to one
track so that no two edges between the same pair of tracks form an
X-crossing (v < x on one track while y < w on the other for edges vw, xy).
Improper layouts also allow edges inside a track between consecutive vertices.

Constructions:
  tree_3track               forest -> 3 tracks, track = depth mod 3
  from_path_decomposition   pw + 1 tracks, greedy interval colouring
  from_tree_partition       3 * width tracks, sub-tracks per bag slot
  ktree_track_layout        k-tree -> at most t_k tracks
  grid_3track, gk_layout    families with known layouts
Transformations:
  wrap                      span s -> 2s + 1 tracks
  balance                   at most ceil(n/t') per track, floor(t + t') tracks
  improper_to_proper        at most twice the tracks, no intra-track edges

Bounds:
  t_k = 3^k * 6^((4^k - 3k - 1) / 9)      t_0 = 1, t_1 = 3, t_2 = 54
  s_k = 6^((4^k - 1) / 3)                 s_0 = 1, s_1 = 6
"""

import heapq
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Any, Hashable, Optional, Sequence, Union

import networkx as nx

from app.config import GK_VERTEX_BUDGET, VERTEX_BUDGET
from app.core.errors import (
    BadParams,
    InconsistentOrder,
    InvalidTreePartition,
    NotAClique,
    NotForest,
    NotKTree,
    NotSameCover,
    ResourceLimit,
    VerificationFailed,
)
from app.core.graph_core import Graph, PathDecomposition, gk_order, lex_bfs
from app.core.report import Report
from app.core.tree_partition import TreePartition, build_tree_partition, partition_structure

log = logging.getLogger("layout.track")

PROPER = "proper"
IMPROPER = "improper"


# ── Domain type ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class TrackLayout:
    tracks: tuple[tuple[int, ...], ...]
    track_ids: tuple[Hashable, ...] = ()
    mode: str = PROPER

    def __post_init__(self):
        tracks = tuple(tuple(int(v) for v in t) for t in self.tracks)
        object.__setattr__(self, "tracks", tracks)
        ids = tuple(self.track_ids) or tuple(range(1, len(tracks) + 1))
        if len(ids) != len(tracks) or len(set(ids)) != len(ids):
            raise BadParams("track ids must be unique, one per track")
        object.__setattr__(self, "track_ids", ids)
        if self.mode not in (PROPER, IMPROPER):
            raise BadParams(f"unknown track layout mode '{self.mode}'")

    @property
    def t(self) -> int:
        return len(self.tracks)

    @property
    def n(self) -> int:
        return sum(len(t) for t in self.tracks)

    @cached_property
    def track_of(self) -> dict[int, int]:
        """Vertex -> track index (canonical number minus one)."""
        return {v: i for i, t in enumerate(self.tracks) for v in t}

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: p for t in self.tracks for p, v in enumerate(t)}

    @cached_property
    def index_of(self) -> dict[Hashable, int]:
        return {label: i for i, label in enumerate(self.track_ids)}

    def label_of(self, v: int) -> Hashable:
        return self.track_ids[self.track_of[v]]

    def compact(self) -> "TrackLayout":
        keep = [i for i, t in enumerate(self.tracks) if t]
        if len(keep) == self.t:
            return self
        return TrackLayout(tuple(self.tracks[i] for i in keep), tuple(self.track_ids[i] for i in keep), self.mode)

    def to_dict(self) -> dict:
        return {"mode": self.mode, "tracks": [list(t) for t in self.tracks]}

    @classmethod
    def from_dict(cls, data: dict) -> "TrackLayout":
        return cls(tuple(tuple(t) for t in data["tracks"]), (), data.get("mode", PROPER))


def _layout(tracks: dict[Hashable, list[int]], mode: str = PROPER) -> TrackLayout:
    """Non-empty tracks ordered by label."""
    labels = sorted(label for label, vs in tracks.items() if vs)
    return TrackLayout(tuple(tuple(tracks[label]) for label in labels), tuple(labels), mode)


def _numbers(L: TrackLayout, numbering: Optional[Sequence[int]]) -> Sequence[int]:
    """Track index -> number in 1..t; canonical is index + 1."""
    if numbering is None:
        return range(1, L.t + 1)
    nums = [int(x) for x in numbering]
    if sorted(nums) != list(range(1, L.t + 1)):
        raise BadParams("track numbering must be a bijection onto 1..t")
    return nums


# ── Bounds ───────────────────────────────────────────────────────────

def t_bound(k: int) -> int:
    return 3 ** k * 6 ** ((4 ** k - 3 * k - 1) // 9)


def s_bound(k: int) -> int:
    return 6 ** ((4 ** k - 1) // 3)


def gk_track_count(k: int) -> int:
    return (k + 1) * (k + 2) // 2


# ── Verification ─────────────────────────────────────────────────────

def max_span(g: Graph, L: TrackLayout, numbering: Optional[Sequence[int]] = None) -> int:
    nums = _numbers(L, numbering)
    where = L.track_of
    return max((abs(nums[where[u]] - nums[where[v]]) for u, v in g.edges), default=0)


def verify_track_layout(g: Graph, L: TrackLayout) -> Report:
    report = Report("track_layout")
    seen: dict[int, int] = {}
    for i, track in enumerate(L.tracks):
        for v in track:
            report.check("cover", 0 <= v < g.n and v not in seen, {"vertex": v, "track": i})
            seen.setdefault(v, i)
    missing = [v for v in range(g.n) if v not in seen]
    if not report.check("cover", not missing, {"missing": missing[:10]}):
        return report

    where, pos = L.track_of, L.position
    pairs: dict[tuple[int, int], list[tuple[int, int, tuple[int, int]]]] = {}
    for u, v in g.edges:
        a, b = where[u], where[v]
        if a == b:
            if L.mode == PROPER:
                report.check("mode", False, {"intra_track_edge": [u, v], "track": a})
            else:
                report.check("mode", abs(pos[u] - pos[v]) == 1, {"non_consecutive_edge": [u, v], "track": a})
            continue
        if a > b:
            a, b, u, v = b, a, v, u
        pairs.setdefault((a, b), []).append((pos[u], pos[v], (u, v)))
    report.checks.setdefault("mode", True)

    # sweep each track pair by position on the lower track
    for (a, b), edges in sorted(pairs.items()):
        edges.sort()
        best: Optional[tuple[int, int, tuple[int, int]]] = None
        i = 0
        while i < len(edges):
            j = i
            while j < len(edges) and edges[j][0] == edges[i][0]:
                if best is not None and best[1] > edges[j][1]:
                    report.check("x_crossing", False,
                                 {"tracks": [a, b], "edges": [list(best[2]), list(edges[j][2])]})
                j += 1
            top = max(edges[i:j], key=lambda e: e[1])
            if best is None or top[1] > best[1]:
                best = top
            i = j
    report.checks.setdefault("x_crossing", True)
    report.stats.update({
        "tracks": sum(1 for t in L.tracks if t),
        "max_track_size": max((len(t) for t in L.tracks), default=0),
        "max_span": max_span(g, L),
        "mode": L.mode,
    })
    if not report.ok:
        log.warning("track layout check failed: %s", report.failed())
    return report


# ── Trees, paths, partitions ─────────────────────────────────────────

def _forest_bfs(t: Graph) -> tuple[list[int], list[int]]:
    """Concatenated lex-BFS orders of the components (smallest vertex roots) and depths."""
    seq: list[int] = []
    depth = [0] * t.n
    for comp in t.components():
        sub, verts = t.subgraph(comp)
        order = lex_bfs(sub, 0)
        for v in order.sequence:
            seq.append(verts[v])
            depth[verts[v]] = order.depth[v]
    return seq, depth


def tree_3track(t: Graph) -> TrackLayout:
    if t.n > 0 and not nx.is_forest(t.to_networkx()):
        raise NotForest("graph has a cycle")
    seq, depth = _forest_bfs(t)
    tracks: dict[int, list[int]] = {}
    for v in seq:
        tracks.setdefault(depth[v] % 3, []).append(v)
    return _layout(tracks)


def from_path_decomposition(g: Graph, pd: PathDecomposition) -> TrackLayout:
    """Intervals [first bag, last bag], coloured greedily by left endpoint."""
    pd.validate(g)
    intervals = pd.intervals(g.n)
    busy: list[tuple[int, int]] = []   # (right end, colour)
    free: list[int] = []
    colours = 0
    tracks: dict[int, list[int]] = {}
    for v in sorted(range(g.n), key=lambda v: (intervals[v][0], intervals[v][1], v)):
        left, right = intervals[v]
        while busy and busy[0][0] < left:
            heapq.heappush(free, heapq.heappop(busy)[1])
        if free:
            c = heapq.heappop(free)
        else:
            c, colours = colours, colours + 1
        heapq.heappush(busy, (right, c))
        tracks.setdefault(c, []).append(v)
    L = _layout(tracks)
    log.info("from_path_decomposition: width=%d tracks=%d", pd.width, L.t)
    return L


def from_tree_partition(g: Graph, tp: TreePartition) -> TrackLayout:
    """3-track layout of the bag tree, each tree track split into width sub-tracks."""
    structure = partition_structure(g, tp)
    if not structure.ok:
        raise InvalidTreePartition(f"invalid tree-partition: {structure.failed()}", witness=structure.witnesses)
    tree = tree_3track(tp.tree())
    tracks: dict[tuple[Hashable, int], list[int]] = {}
    for label, nodes in zip(tree.track_ids, tree.tracks):
        for x in nodes:
            for j, v in enumerate(tp.bags[x]):
                tracks.setdefault((label, j), []).append(v)
    return _layout(tracks)


# ── Transformations ──────────────────────────────────────────────────

def wrap(g: Graph, L: TrackLayout, numbering: Optional[Sequence[int]] = None) -> TrackLayout:
    """Merge tracks numbered i = j (mod 2s+1), lower numbers first."""
    nums = _numbers(L, numbering)
    span = max_span(g, L, nums)
    modulus = 2 * span + 1
    if L.t <= modulus:
        return L
    tracks: dict[int, list[int]] = {}
    for idx in sorted(range(L.t), key=lambda i: nums[i]):
        tracks.setdefault((nums[idx] - 1) % modulus + 1, []).extend(L.tracks[idx])
    wrapped = _layout(tracks, L.mode)
    log.debug("wrap: span=%d tracks %d -> %d", span, L.t, wrapped.t)
    return wrapped


def balance(L: TrackLayout, t_prime: Union[int, str, Fraction]) -> TrackLayout:
    """Split tracks longer than ceil(n/t') into consecutive blocks."""
    try:
        tp = Fraction(t_prime)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise BadParams(f"t' must be a positive rational, got {t_prime!r}") from exc
    if tp <= 0:
        raise BadParams(f"t' must be positive, got {t_prime}")
    if L.n == 0:
        return L
    cap = math.ceil(Fraction(L.n) / tp)
    if all(len(t) <= cap for t in L.tracks):
        return L
    tracks: list[tuple[int, ...]] = []
    ids: list[Hashable] = []
    for label, track in zip(L.track_ids, L.tracks):
        for b, start in enumerate(range(0, max(len(track), 1), cap)):
            block = track[start:start + cap]
            if block:
                tracks.append(block)
                ids.append((label, b))
    return TrackLayout(tuple(tracks), tuple(ids), L.mode)


def improper_to_proper(L: TrackLayout) -> TrackLayout:
    """Every second vertex of each track moves to a twin track; order kept."""
    if L.mode == PROPER:
        return L
    tracks: list[tuple[int, ...]] = []
    ids: list[Hashable] = []
    for label, track in zip(L.track_ids, L.tracks):
        for parity in (0, 1):
            part = track[parity::2]
            if part:
                tracks.append(part)
                ids.append((label, parity))
    return TrackLayout(tuple(tracks), tuple(ids), PROPER)


# ── Cliques and nice orderings ───────────────────────────────────────

def _cover(clique: Sequence[int], L: TrackLayout) -> frozenset:
    return frozenset(L.label_of(v) for v in clique)


def covered_tracks(clique: Sequence[int], L: TrackLayout, g: Graph) -> frozenset:
    if not g.is_clique(clique):
        raise NotAClique("vertices are not pairwise adjacent", witness={"clique": list(clique)})
    return _cover(clique, L)


def nice_order(cliques: Sequence[Sequence[int]], L: TrackLayout) -> list[int]:
    """
    Indices of `cliques` in a nice order: whenever a track holds v of C1 and
    w of C2 with v before w, C1 comes first. All cliques must cover the same
    track set.
    """
    if not cliques:
        return []
    covers = [_cover(c, L) for c in cliques]
    for i, (clique, cover) in enumerate(zip(cliques, covers)):
        if cover != covers[0]:
            raise NotSameCover("cliques cover different track sets", witness={"first": 0, "other": i})
        if len(cover) != len(set(clique)):
            raise NotAClique("two clique vertices share a track", witness={"clique": list(clique)})
    shared = sorted(covers[0], key=lambda label: L.index_of[label])
    keys: list[tuple[int, ...]] = []
    for clique in cliques:
        on = {L.label_of(v): L.position[v] for v in clique}
        keys.append(tuple(on[label] for label in shared))
    order = sorted(range(len(cliques)), key=lambda i: (keys[i], i))
    for col, label in enumerate(shared):
        for a, b in zip(order, order[1:]):
            if keys[a][col] > keys[b][col]:
                raise InconsistentOrder(
                    "cliques are ordered oppositely on two tracks",
                    witness={"cliques": [list(cliques[a]), list(cliques[b])], "track": repr(label)},
                )
    return order


def nice_clique_partition(cliques: Sequence[Sequence[int]], L: TrackLayout) -> list[list[int]]:
    """Cliques grouped by covered track set, each group nicely ordered."""
    groups: dict[frozenset, list[int]] = {}
    for i, clique in enumerate(cliques):
        groups.setdefault(_cover(clique, L), []).append(i)
    out = []
    for members in groups.values():
        order = nice_order([cliques[i] for i in members], L)
        out.append([members[i] for i in order])
    return out


def clique_partition_bound(t: int, omega: int) -> int:
    return sum(comb(t, i) for i in range(1, omega + 1))


# ── k-trees ──────────────────────────────────────────────────────────

def _ktree_level(g: Graph, k: int, registries: list[dict[frozenset, int]]) -> dict[Hashable, list[int]]:
    """
    Track label -> ordered vertices for a k-tree g.

    Labels: level 0 is 0; level k is (depth mod 3, alpha, level-(k-1) label).
    registries[j] assigns indices to the track sets covered by parent
    cliques inside level-j layouts; it is shared by the whole recursion.
    """
    if g.n == 0:
        return {}
    if k == 0:
        return {0: list(range(g.n))}
    tp = build_tree_partition(g, k)
    nodes = len(tp.bags)

    bag_tracks: list[dict[Hashable, list[int]]] = []
    label_of: dict[int, Hashable] = {}
    for bag in tp.bags:
        if not bag:
            bag_tracks.append({})
            continue
        sub, verts = g.subgraph(bag)
        mapped = {label: [verts[v] for v in vs] for label, vs in _ktree_level(sub, k - 1, registries).items()}
        for label, vs in mapped.items():
            for v in vs:
                label_of[v] = label
        bag_tracks.append(mapped)

    registry = registries[k - 1]
    alpha = [0] * nodes
    for x in range(nodes):
        # component roots hang off an empty root by an empty clique: alpha stays 0
        if tp.parent[x] >= 0 and tp.parent_clique[x]:
            cover = frozenset(label_of[u] for u in tp.parent_clique[x])
            alpha[x] = registry.setdefault(cover, len(registry))

    # track layout of the bag tree, depth by depth
    by_depth: dict[int, list[int]] = {}
    for x in range(nodes):
        by_depth.setdefault(tp.depth[x], []).append(x)
    tree_pos = [0] * nodes
    tree_tracks: dict[tuple[int, int], list[int]] = {}
    bag_layouts: dict[int, TrackLayout] = {}
    for d in sorted(by_depth):
        level = by_depth[d]
        rank = {x: 0 for x in level}
        siblings: dict[tuple[int, int], list[int]] = {}
        for x in level:
            if tp.parent[x] >= 0 and tp.parent_clique[x]:
                siblings.setdefault((tp.parent[x], alpha[x]), []).append(x)
        for (p, _), xs in siblings.items():
            if len(xs) < 2:
                continue
            if p not in bag_layouts:
                bag_layouts[p] = _layout(bag_tracks[p])
            order = nice_order([tp.parent_clique[x] for x in xs], bag_layouts[p])
            for r, i in enumerate(order):
                rank[xs[i]] = r
        level.sort(key=lambda x: (tree_pos[tp.parent[x]] if tp.parent[x] >= 0 else 0,
                                  tp.parent[x], rank[x], min(tp.bags[x], default=-1)))
        for x in level:
            track = tree_tracks.setdefault((d, alpha[x]), [])
            tree_pos[x] = len(track)
            track.append(x)

    # expand bags into sub-tracks and wrap depths mod 3
    out: dict[Hashable, list[int]] = {}
    for (d, a) in sorted(tree_tracks):
        for x in tree_tracks[(d, a)]:
            for label, vs in bag_tracks[x].items():
                out.setdefault((d % 3, a, label), []).extend(vs)
    log.debug("ktree level %d: n=%d nodes=%d tracks=%d", k, g.n, nodes, len(out))
    return out


def ktree_track_layout(g: Graph, k: int) -> TrackLayout:
    """At most t_k tracks for a k-tree; bounds are asserted, not assumed."""
    if k < 0:
        raise BadParams("k must be >= 0")
    if g.n > VERTEX_BUDGET:
        raise ResourceLimit(f"{g.n} vertices exceed the budget of {VERTEX_BUDGET}")
    if k == 0 and g.m:
        raise NotKTree("a 0-tree has no edges")
    registries: list[dict[frozenset, int]] = [{} for _ in range(k)]
    L = _layout(_ktree_level(g, k, registries))
    for j, registry in enumerate(registries):
        if len(registry) > s_bound(j):
            raise VerificationFailed(f"{len(registry)} covered track sets at level {j} exceed s_{j}={s_bound(j)}")
    if L.t > t_bound(k):
        raise VerificationFailed(f"{L.t} tracks exceed t_{k}={t_bound(k)}")
    log.info("ktree_track_layout: n=%d k=%d tracks=%d (t_k=%d) registries=%s",
             g.n, k, L.t, t_bound(k), [len(r) for r in registries])
    return L


# ── Families ─────────────────────────────────────────────────────────

def grid_3track(rows: int, cols: int) -> TrackLayout:
    """Diagonals r + c ordered by row, wrapped with span 1."""
    if rows < 1 or cols < 1:
        raise BadParams("grid needs rows, cols >= 1")
    if rows * cols > VERTEX_BUDGET:
        raise ResourceLimit(f"{rows * cols} vertices exceed the budget of {VERTEX_BUDGET}")
    edges = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
    edges += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
    g = Graph(rows * cols, tuple(edges))
    diagonals: dict[int, list[int]] = {}
    for r in range(rows):
        for c in range(cols):
            diagonals.setdefault(r + c + 1, []).append(r * cols + c)
    return wrap(g, _layout(diagonals))


def _gk_tracks(k: int) -> list[list[int]]:
    if k == 0:
        return [[0]]
    sub = _gk_tracks(k - 1)
    sub_n = gk_order(k - 1)
    middle = k * k + k + 1
    base = k + middle
    copies: list[list[int]] = [[] for _ in sub]
    for j in range(middle):
        offset = base + j * sub_n
        for t, vs in enumerate(sub):
            copies[t].extend(offset + v for v in vs)
    return [[i] for i in range(k)] + [list(range(k, base))] + copies


def gk_layout(k: int, budget: Optional[int] = None) -> TrackLayout:
    """(k+1)(k+2)/2 tracks: clique vertex i on track i, middle vertices next, copies after."""
    if k < 0:
        raise BadParams("k must be >= 0")
    budget = GK_VERTEX_BUDGET if budget is None else budget
    if gk_order(k) > budget:
        raise ResourceLimit(f"G_{k} has {gk_order(k)} vertices, budget {budget}")
    tracks = _gk_tracks(k)
    return TrackLayout(tuple(tuple(t) for t in tracks))


def cliques_of(g: Graph, limit: int = 4) -> list[tuple[int, ...]]:
    """All cliques with at most `limit` vertices (small graphs)."""
    out: list[tuple[int, ...]] = []
    for clique in nx.enumerate_all_cliques(g.to_networkx()):
        if len(clique) > limit:
            break
        out.append(tuple(sorted(clique)))
    return out


def layout_summary(L: TrackLayout) -> dict[str, Any]:
    return {"tracks": L.t, "mode": L.mode, "sizes": [len(t) for t in L.tracks]}
