"""
Graph core: immutable graph values, vertex orderings, chordality and k-tree
machinery, acyclic colourings and graph-family generators.

Vertices are dense integers 0..n-1. Edges are stored once as (u, v) with
u < v, sorted lexicographically.

k-tree recognition:
  A connected chordal graph with maximum clique size k+1 is a k-tree in the
  non-strict sense (built by repeatedly adding a vertex adjacent to a clique
  of at most k vertices). LexBFS from any root yields an ordering in which
  the earlier neighbours of every vertex form a clique (a reversed perfect
  elimination ordering); the largest such back-clique has exactly k vertices.

Generator id schemes (stable, golden-file friendly):
  path/cycle      0-1-2-...-(n-1)
  star            center 0, leaves 1..m
  grid            (r, c) -> r*cols + c
  tree            vertex i > 0 attaches to a uniform earlier vertex
  ktree           K_{k+1} on 0..k, then vertex v joins a uniform k-clique
  caterpillar     spine 0..m-1, legs of spine i follow in order
  gk              clique 0..k-1, middle vertices next, then copies of G_{k-1}
"""

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Iterable, Optional, Sequence

import networkx as nx

from app.config import GK_VERTEX_BUDGET, VERTEX_BUDGET
from app.core.errors import (
    BadParams,
    DisconnectedGraph,
    InvalidDecomposition,
    InvalidGraph,
    NotChordal,
    NotPEO,
    ResourceLimit,
)
from app.core.report import Report

log = logging.getLogger("layout.graph")

Edge = tuple[int, int]


# ── Domain types ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...] = ()
    meta: dict[str, Any] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidGraph(f"negative vertex count {self.n}")
        normalised = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise InvalidGraph(f"self-loop at {u}", witness={"edge": [u, v]})
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraph(f"edge {u}-{v} out of range 0..{self.n - 1}", witness={"edge": [u, v]})
            normalised.append((u, v) if u < v else (v, u))
        unique = sorted(set(normalised))
        if len(unique) != len(normalised):
            raise InvalidGraph("parallel edges")
        object.__setattr__(self, "edges", tuple(unique))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbours(self) -> tuple[tuple[int, ...], ...]:
        """Ascending neighbour tuples, indexed by vertex."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.neighbours)

    def degree(self, v: int) -> int:
        return len(self.neighbours[v])

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.neighbours), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(a, b) for a, b in combinations(vs, 2))

    def components(self) -> list[list[int]]:
        """Vertex lists of connected components, ordered by smallest vertex."""
        comps = [sorted(c) for c in nx.connected_components(self.to_networkx())]
        return sorted(comps, key=lambda c: c[0])

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def subgraph(self, vertices: Sequence[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph relabelled 0..len-1 in the given vertex order; returns (graph, local->global)."""
        verts = tuple(vertices)
        local = {v: i for i, v in enumerate(verts)}
        edges = []
        for v in verts:
            for w in self.neighbours[v]:
                if w in local and v < w:
                    edges.append((local[v], local[w]))
        return Graph(len(verts), tuple(edges)), verts

    def with_edges(self, extra: Iterable[Edge]) -> "Graph":
        merged = set(self.edges) | {(min(u, v), max(u, v)) for u, v in extra}
        return Graph(self.n, tuple(merged), meta=dict(self.meta))

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G

    @classmethod
    def from_networkx(cls, G: nx.Graph, meta: Optional[dict] = None) -> "Graph":
        nodes = sorted(G.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        edges = tuple((index[u], index[v]) for u, v in G.edges())
        return cls(len(nodes), edges, meta=dict(meta or {}))

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), tuple(tuple(e) for e in data.get("edges", [])), meta=dict(data.get("meta") or {}))


@dataclass(frozen=True)
class VertexOrdering:
    sequence: tuple[int, ...]
    depth: Optional[tuple[int, ...]] = None  # indexed by vertex

    def __post_init__(self):
        seq = tuple(int(v) for v in self.sequence)
        object.__setattr__(self, "sequence", seq)
        if sorted(seq) != list(range(len(seq))):
            raise BadParams("vertex ordering is not a permutation of 0..n-1")
        if self.depth is not None:
            depth = tuple(int(d) for d in self.depth)
            object.__setattr__(self, "depth", depth)
            if len(depth) != len(seq):
                raise BadParams("depth map does not cover every vertex")
            along = [depth[v] for v in seq]
            if any(a > b for a, b in zip(along, along[1:])):
                raise BadParams("depth decreases along the ordering")

    def __len__(self) -> int:
        return len(self.sequence)

    def __iter__(self):
        return iter(self.sequence)

    @cached_property
    def position(self) -> tuple[int, ...]:
        pos = [0] * len(self.sequence)
        for i, v in enumerate(self.sequence):
            pos[v] = i
        return tuple(pos)

    def reversed(self) -> "VertexOrdering":
        return VertexOrdering(tuple(reversed(self.sequence)))

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"sequence": list(self.sequence)}
        if self.depth is not None:
            out["depth"] = list(self.depth)
        return out


@dataclass(frozen=True)
class Colouring:
    colour: tuple[int, ...]  # indexed by vertex
    colour_count: int = -1

    def __post_init__(self):
        colour = tuple(int(c) for c in self.colour)
        object.__setattr__(self, "colour", colour)
        if any(c < 0 for c in colour):
            raise BadParams("colours must be non-negative")
        if self.colour_count < 0:
            object.__setattr__(self, "colour_count", len(set(colour)))

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colour):
            out.setdefault(c, []).append(v)
        return dict(sorted(out.items()))

    def to_dict(self) -> dict:
        return {"colour": list(self.colour), "colour_count": self.colour_count}


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(int(v) for v in b) for b in self.bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def intervals(self, n: int) -> list[tuple[int, int]]:
        """[first bag, last bag] per vertex; assumes validity."""
        first = [-1] * n
        last = [-1] * n
        for i, bag in enumerate(self.bags):
            for v in bag:
                if first[v] < 0:
                    first[v] = i
                last[v] = i
        return list(zip(first, last))

    def validate(self, g: Graph) -> "PathDecomposition":
        where: dict[int, list[int]] = {}
        for i, bag in enumerate(self.bags):
            for v in bag:
                if not 0 <= v < g.n:
                    raise InvalidDecomposition(f"bag {i} holds unknown vertex {v}")
                where.setdefault(v, []).append(i)
        missing = [v for v in range(g.n) if v not in where]
        if missing:
            raise InvalidDecomposition("vertices in no bag", witness={"vertices": missing[:10]})
        for v, idx in where.items():
            if idx[-1] - idx[0] + 1 != len(idx):
                raise InvalidDecomposition(f"bags of vertex {v} are not contiguous", witness={"vertex": v, "bags": idx})
        for u, v in g.edges:
            lo = max(where[u][0], where[v][0])
            hi = min(where[u][-1], where[v][-1])
            if lo > hi:
                raise InvalidDecomposition(f"edge {u}-{v} in no bag", witness={"edge": [u, v]})
        return self

    @classmethod
    def from_ordering(cls, g: Graph, order: VertexOrdering) -> "PathDecomposition":
        """Bag i = {v_i} plus the earlier vertices with a neighbour at position >= i."""
        pos = order.position
        last_nbr = [max((pos[w] for w in g.neighbours[v]), default=pos[v]) for v in range(g.n)]
        bags = []
        active: set[int] = set()
        for i, v in enumerate(order.sequence):
            active = {u for u in active if last_nbr[u] >= i}
            bags.append(frozenset(active | {v}))
            active.add(v)
        return cls(tuple(bags))

    def to_dict(self) -> dict:
        return {"bags": [sorted(b) for b in self.bags]}


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(int(v) for v in b) for b in self.bags))
        object.__setattr__(self, "tree_edges", tuple((int(a), int(b)) for a, b in self.tree_edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, g: Graph) -> "TreeDecomposition":
        T = nx.Graph()
        T.add_nodes_from(range(len(self.bags)))
        for a, b in self.tree_edges:
            if not (0 <= a < len(self.bags) and 0 <= b < len(self.bags)):
                raise InvalidDecomposition(f"tree edge {a}-{b} names a missing bag")
            T.add_edge(a, b)
        if self.bags and not nx.is_tree(T):
            raise InvalidDecomposition("decomposition tree is not a tree")
        holders: dict[int, list[int]] = {}
        for i, bag in enumerate(self.bags):
            for v in bag:
                if not 0 <= v < g.n:
                    raise InvalidDecomposition(f"bag {i} holds unknown vertex {v}")
                holders.setdefault(v, []).append(i)
        missing = [v for v in range(g.n) if v not in holders]
        if missing:
            raise InvalidDecomposition("vertices in no bag", witness={"vertices": missing[:10]})
        for u, v in g.edges:
            if not any(v in self.bags[i] for i in holders[u]):
                raise InvalidDecomposition(f"edge {u}-{v} in no bag", witness={"edge": [u, v]})
        for v, idx in holders.items():
            if len(idx) > 1 and not nx.is_connected(T.subgraph(idx)):
                raise InvalidDecomposition(f"bags of vertex {v} are not connected in the tree", witness={"vertex": v})
        return self

    def to_dict(self) -> dict:
        return {"bags": [sorted(b) for b in self.bags], "tree_edges": [list(e) for e in self.tree_edges]}


# ── Orderings ────────────────────────────────────────────────────────

def lex_bfs(g: Graph, root: int) -> VertexOrdering:
    """
    Breadth-first ordering from root: equal-depth vertices follow their
    parents' order, children of one parent by ascending id. On trees this
    is the lexicographical breadth-first ordering.
    """
    if not 0 <= root < g.n:
        raise BadParams(f"root {root} not in graph")
    depth = [-1] * g.n
    depth[root] = 0
    seq = [root]
    head = 0
    while head < len(seq):
        v = seq[head]
        head += 1
        for w in g.neighbours[v]:
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                seq.append(w)
    if len(seq) != g.n:
        unreached = next(v for v in range(g.n) if depth[v] < 0)
        raise DisconnectedGraph(f"vertex {unreached} unreachable from {root}", witness={"vertex": unreached})
    return VertexOrdering(tuple(seq), tuple(depth))


def _lexbfs_sequence(g: Graph, root: int) -> list[int]:
    """LexBFS by partition refinement; every cell stays in ascending id order."""
    members: dict[int, dict[int, None]] = {0: {root: None}, 1: {v: None for v in range(g.n) if v != root}}
    nxt: dict[int, Optional[int]] = {0: 1, 1: None}
    prv: dict[int, Optional[int]] = {0: None, 1: 0}
    cell_of: list[Optional[int]] = [1] * g.n
    cell_of[root] = 0
    head: Optional[int] = 0
    fresh = 2

    def unlink(c: int):
        nonlocal head
        p, q = prv.pop(c), nxt.pop(c)
        del members[c]
        if p is None:
            head = q
        else:
            nxt[p] = q
        if q is not None:
            prv[q] = p

    seq: list[int] = []
    while head is not None:
        if not members[head]:
            unlink(head)
            continue
        v = next(iter(members[head]))
        del members[head][v]
        cell_of[v] = None
        seq.append(v)
        split: dict[int, int] = {}
        for w in g.neighbours[v]:
            c = cell_of[w]
            if c is None:
                continue
            if c not in split:
                new = fresh
                fresh += 1
                members[new] = {}
                p = prv[c]
                prv[new], nxt[new] = p, c
                prv[c] = new
                if p is None:
                    head = new
                else:
                    nxt[p] = new
                split[c] = new
            del members[c][w]
            members[split[c]][w] = None
            cell_of[w] = split[c]
        for c in split:
            if not members[c]:
                unlink(c)
    return seq


def ktree_peo(g: Graph, root: Optional[int] = None) -> tuple[int, VertexOrdering]:
    """
    Minimum k and a LexBFS ordering whose back-cliques have at most k vertices.

    Root defaults to a minimum-degree vertex (smallest id on ties).
    """
    if g.n == 0:
        return 0, VertexOrdering(())
    if root is None:
        root = min(range(g.n), key=lambda v: (g.degree(v), v))
    distances = lex_bfs(g, root).depth  # raises DisconnectedGraph
    seq = _lexbfs_sequence(g, root)
    pos = [0] * g.n
    for i, v in enumerate(seq):
        pos[v] = i
    k = 0
    for v in seq:
        earlier = [u for u in g.neighbours[v] if pos[u] < pos[v]]
        k = max(k, len(earlier))
        if len(earlier) < 2:
            continue
        latest = max(earlier, key=lambda u: pos[u])
        for u in earlier:
            if u != latest and not g.has_edge(u, latest):
                raise NotChordal(
                    f"earlier neighbours {u} and {latest} of {v} are not adjacent",
                    witness={"vertex": v, "pair": [u, latest]},
                )
    log.debug("ktree_peo: n=%d root=%d k=%d", g.n, root, k)
    return k, VertexOrdering(tuple(seq), distances)


def back_cliques(g: Graph, order: VertexOrdering) -> list[list[int]]:
    pos = order.position
    return [[u for u in g.neighbours[v] if pos[u] < pos[v]] for v in range(g.n)]


# ── k-tree completion and colouring ──────────────────────────────────

def complete_to_ktree(g: Graph, td: TreeDecomposition) -> tuple[Graph, tuple[Edge, ...]]:
    """
    Clique-ify every bag; components of the result are joined by bridges from
    their smallest vertex to vertex-min of the first component (width >= 1).
    """
    td.validate(g)
    k = max(td.width, 0)
    fill: set[Edge] = set(g.edges)
    for bag in td.bags:
        fill.update(combinations(sorted(bag), 2))
    completed = Graph(g.n, tuple(fill))
    if k >= 1:
        comps = completed.components()
        anchor = comps[0][0] if comps else 0
        fill.update((anchor, c[0]) for c in comps[1:])
        completed = Graph(g.n, tuple(fill))
    added = tuple(sorted(set(completed.edges) - set(g.edges)))
    meta = dict(g.meta)
    meta["completed_k"] = k
    log.info("complete_to_ktree: n=%d width=%d added %d edges", g.n, k, len(added))
    return Graph(g.n, completed.edges, meta=meta), added


def acyclic_colouring_ktree(g: Graph, order: VertexOrdering, k: int) -> Colouring:
    """Greedy: each vertex takes the smallest colour absent from its back-clique."""
    if len(order) != g.n:
        raise BadParams("ordering does not cover the graph")
    pos = order.position
    colour = [-1] * g.n
    for v in order.sequence:
        back = [u for u in g.neighbours[v] if pos[u] < pos[v]]
        if len(back) > k or not g.is_clique(back):
            raise NotPEO(f"back-neighbours of {v} are not a clique of size <= {k}", witness={"vertex": v, "back": back})
        used = {colour[u] for u in back}
        colour[v] = next(c for c in range(k + 2) if c not in used)
    return Colouring(tuple(colour))


def verify_acyclic_colouring(g: Graph, c: Colouring) -> Report:
    report = Report("acyclic_colouring")
    if not report.check("covers", len(c.colour) == g.n, {"expected": g.n, "got": len(c.colour)}):
        return report
    for u, v in g.edges:
        report.check("proper", c.colour[u] != c.colour[v], {"edge": [u, v]})
    forests: dict[tuple[int, int], nx.utils.UnionFind] = {}
    for u, v in g.edges:
        a, b = sorted((c.colour[u], c.colour[v]))
        if a == b:
            continue
        uf = forests.setdefault((a, b), nx.utils.UnionFind())
        if uf[u] == uf[v]:
            report.check("acyclic", False, {"colours": [a, b], "closing_edge": [u, v]})
        else:
            uf.union(u, v)
    report.checks.setdefault("proper", True)
    report.checks.setdefault("acyclic", True)
    report.stats["colour_count"] = c.colour_count
    return report


def bipartition(g: Graph) -> tuple[list[int], list[int]]:
    """Two sides; each component's smallest vertex lands in the first."""
    try:
        side = nx.bipartite.color(g.to_networkx())
    except nx.NetworkXError as exc:
        raise BadParams("graph is not bipartite") from exc
    a = sorted(v for v, s in side.items() if s == 1)
    b = sorted(v for v, s in side.items() if s == 0)
    return a, b


# ── Generators ───────────────────────────────────────────────────────

def _need(params: dict, name: str, lo: int = 0) -> int:
    if name not in params or params[name] is None:
        raise BadParams(f"missing parameter '{name}'")
    try:
        value = int(params[name])
    except (TypeError, ValueError) as exc:
        raise BadParams(f"parameter '{name}' must be an integer") from exc
    if value < lo:
        raise BadParams(f"parameter '{name}' must be >= {lo}, got {value}")
    return value


def _probability(params: dict, name: str = "p") -> float:
    try:
        p = float(params.get(name, 0.5))
    except (TypeError, ValueError) as exc:
        raise BadParams(f"parameter '{name}' must be a number") from exc
    if not 0.0 <= p <= 1.0:
        raise BadParams(f"parameter '{name}' must lie in [0, 1]")
    return p


def _budget(n: int, budget: int = VERTEX_BUDGET):
    if n > budget:
        raise ResourceLimit(f"{n} vertices exceed the budget of {budget}", witness={"n": n, "budget": budget})


def _random_ktree(k: int, n: int, rng: random.Random) -> tuple[list[Edge], list[list]]:
    if n < k + 1:
        raise BadParams(f"a strict {k}-tree needs at least {k + 1} vertices")
    if k == 0:
        return [], [[v, []] for v in range(1, n)]
    edges = list(combinations(range(k + 1), 2))
    cliques = list(combinations(range(k + 1), k))
    construction: list[list] = []
    for v in range(k + 1, n):
        host = cliques[rng.randrange(len(cliques))]
        edges.extend((u, v) for u in host)
        construction.append([v, list(host)])
        cliques.extend(sub + (v,) for sub in combinations(host, k - 1))
    return edges, construction


def _gk_order(k: int) -> int:
    size = 1
    for j in range(1, k + 1):
        middle = j * j + j + 1
        size = j + middle + middle * size
    return size


def _gk_parts(k: int) -> tuple[int, list[Edge], list[frozenset[int]], list[tuple[int, int]]]:
    """(n, edges, tree-decomposition bags, tree edges) of G_k."""
    if k == 0:
        return 1, [], [frozenset({0})], []
    sub_n, sub_edges, sub_bags, sub_tree = _gk_parts(k - 1)
    middle = k * k + k + 1
    clique = frozenset(range(k))
    edges: list[Edge] = list(combinations(range(k), 2))
    edges.extend((v, w) for w in range(k, k + middle) for v in range(k))
    bags: list[frozenset[int]] = [clique]
    tree: list[tuple[int, int]] = []
    base = k + middle
    for j in range(middle):
        w = k + j
        off = base + j * sub_n
        edges.extend((w, off + h) for h in range(sub_n))
        edges.extend((off + a, off + b) for a, b in sub_edges)
        hub = len(bags)
        bags.append(clique | {w})
        tree.append((0, hub))
        first = len(bags)
        bags.extend(frozenset(off + h for h in bag) | {w} for bag in sub_bags)
        tree.extend((first + a, first + b) for a, b in sub_tree)
        tree.append((hub, first))
    return base + middle * sub_n, edges, bags, tree


def generate_Gk(k: int, budget: Optional[int] = None) -> Graph:
    """
    G_0 = K_1; G_k = k-clique + (k^2+k+1) middle vertices adjacent to the
    whole clique, each fully joined to its own copy of G_{k-1}.
    """
    if k < 0:
        raise BadParams("k must be >= 0")
    budget = GK_VERTEX_BUDGET if budget is None else budget
    size = _gk_order(k)
    _budget(size, budget)
    n, edges, _, _ = _gk_parts(k)
    log.info("generate_Gk: k=%d n=%d m=%d", k, n, len(edges))
    return Graph(n, tuple(edges), meta={"family": "gk", "params": {"k": k}, "seed": None})


def gk_tree_decomposition(k: int, budget: Optional[int] = None) -> TreeDecomposition:
    """Width-k tree-decomposition of generate_Gk(k), built by the same recursion."""
    budget = GK_VERTEX_BUDGET if budget is None else budget
    _budget(_gk_order(k), budget)
    _, _, bags, tree = _gk_parts(k)
    return TreeDecomposition(tuple(bags), tuple(tree))


def gk_order(k: int) -> int:
    return _gk_order(k)


RANDOM_FAMILIES = {"tree", "ktree", "partial_ktree", "gnp", "bipartite"}


def generate(family: str, params: Optional[dict] = None, seed: Optional[int] = None) -> Graph:
    """Deterministic for a fixed seed; raises BadParams on invalid parameters."""
    params = dict(params or {})
    if family in RANDOM_FAMILIES and seed is None:
        raise BadParams(f"family '{family}' is randomized and needs a seed")
    rng = random.Random(seed)
    meta: dict[str, Any] = {"family": family, "params": params, "seed": seed}

    if family == "path":
        n = _need(params, "n", 1)
        _budget(n)
        G = nx.path_graph(n)
    elif family == "cycle":
        n = _need(params, "n", 3)
        _budget(n)
        G = nx.cycle_graph(n)
    elif family == "star":
        m = _need(params, "m", 0)
        _budget(m + 1)
        G = nx.star_graph(m)
    elif family == "complete":
        n = _need(params, "n", 1)
        _budget(n)
        G = nx.complete_graph(n)
    elif family == "grid":
        rows, cols = _need(params, "rows", 1), _need(params, "cols", 1)
        _budget(rows * cols)
        G = nx.relabel_nodes(nx.grid_2d_graph(rows, cols), lambda rc: rc[0] * cols + rc[1])
    elif family == "tree":
        n = _need(params, "n", 1)
        _budget(n)
        return Graph(n, tuple((rng.randrange(v), v) for v in range(1, n)), meta=meta)
    elif family == "ktree":
        k, n = _need(params, "k", 0), _need(params, "n", 1)
        _budget(n)
        edges, construction = _random_ktree(k, n, rng)
        meta["construction"] = construction
        return Graph(n, tuple(edges), meta=meta)
    elif family == "partial_ktree":
        k, n = _need(params, "k", 0), _need(params, "n", 1)
        p = _probability(params)
        _budget(n)
        edges, construction = _random_ktree(k, n, rng)
        meta["construction"] = construction
        return Graph(n, tuple(e for e in edges if rng.random() < p), meta=meta)
    elif family == "caterpillar":
        m, legs = _need(params, "m", 1), _need(params, "legs", 0)
        _budget(m * (legs + 1))
        edges = [(i, i + 1) for i in range(m - 1)]
        nxt = m
        for i in range(m):
            edges.extend((i, nxt + j) for j in range(legs))
            nxt += legs
        return Graph(nxt, tuple(edges), meta=meta)
    elif family == "gnp":
        n = _need(params, "n", 0)
        _budget(n)
        G = nx.gnp_random_graph(n, _probability(params), seed=seed)
    elif family == "bipartite":
        a, b = _need(params, "a", 0), _need(params, "b", 0)
        p = _probability(params)
        _budget(a + b)
        edges = [(u, a + v) for u in range(a) for v in range(b) if rng.random() < p]
        meta["parts"] = [list(range(a)), list(range(a, a + b))]
        return Graph(a + b, tuple(edges), meta=meta)
    elif family == "gk":
        g = generate_Gk(_need(params, "k", 0))
        return Graph(g.n, g.edges, meta=meta)
    else:
        raise BadParams(f"unknown family '{family}'")
    return Graph.from_networkx(G, meta=meta)
