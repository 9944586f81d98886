"""
Tree-partitions of k-trees.

Construction (connected k-tree G, root r of minimum degree):
  sigma  = LexBFS ordering from r (back-cliques of size <= k)
  V_d    = vertices at depth d
  bags   = connected components of G[V_d], one tree node each
  parent = the unique depth-(d-1) bag holding the vertices adjacent to the bag;
           those vertices form the parent clique C_x

Guarantees:
  (a) C_x is a clique of G inside the parent bag
  (b) every bag induces a connected (k-1)-tree
  width <= max{1, k(D-1)}            root of minimum degree
  width <= max{1, D, k(D-1)}         arbitrary root
Disconnected input: one partition per component (smallest vertex first),
hung under a new empty root bag at depth 0.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import networkx as nx

from app.core.errors import BadParams, InvalidTreePartition, LayoutError, NotChordal, NotKTree
from app.core.graph_core import Graph, ktree_peo
from app.core.report import Report

log = logging.getLogger("layout.partition")


@dataclass(frozen=True)
class TreePartition:
    parent: tuple[int, ...]                  # -1 at the root
    bags: tuple[tuple[int, ...], ...]        # members in ordering order
    parent_clique: tuple[tuple[int, ...], ...]
    depth: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(int(p) for p in self.parent))
        object.__setattr__(self, "bags", tuple(tuple(int(v) for v in b) for b in self.bags))
        object.__setattr__(self, "parent_clique", tuple(tuple(int(v) for v in c) for c in self.parent_clique))
        object.__setattr__(self, "depth", tuple(int(d) for d in self.depth))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0)

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in self.bags]
        for x, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(x)
        return tuple(tuple(k) for k in kids)

    def bag_of(self) -> dict[int, int]:
        return {v: x for x, bag in enumerate(self.bags) for v in bag}

    def tree(self) -> Graph:
        """The bag tree as a graph on node ids."""
        return Graph(len(self.bags), tuple((p, x) for x, p in enumerate(self.parent) if p >= 0))

    def to_dict(self) -> dict:
        return {
            "parent": list(self.parent),
            "bags": [list(b) for b in self.bags],
            "parent_clique": [list(c) for c in self.parent_clique],
            "depth": list(self.depth),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreePartition":
        parent = [int(p) for p in data["parent"]]
        depth = data.get("depth")
        if depth is None:
            depth = [_depth_of(parent, x) for x in range(len(parent))]
        return cls(tuple(parent), tuple(tuple(b) for b in data["bags"]),
                   tuple(tuple(c) for c in data.get("parent_clique", [[] for _ in parent])), tuple(depth))


def _depth_of(parent: list[int], x: int) -> int:
    d, seen = 0, set()
    while parent[x] >= 0:
        if x in seen:
            raise InvalidTreePartition("parent pointers contain a cycle", witness={"node": x})
        seen.add(x)
        x = parent[x]
        d += 1
    return d


def width_bound(k: int, max_degree: int, strict: bool = True) -> int:
    bound = max(1, k * (max_degree - 1))
    return bound if strict else max(bound, max_degree)


# ── Construction ─────────────────────────────────────────────────────

def _partition_connected(g: Graph, k: int, root: Optional[int]) -> TreePartition:
    try:
        kk, order = ktree_peo(g, root)
    except NotChordal as exc:
        raise NotKTree(f"graph is not a k-tree: {exc}", witness=exc.witness) from exc
    if kk > k:
        raise NotKTree(f"graph is a {kk}-tree, not a {k}-tree", witness={"k": kk})
    depth = order.depth
    uf = nx.utils.UnionFind(range(g.n))
    for u, v in g.edges:
        if depth[u] == depth[v]:
            uf.union(u, v)

    node_of_root: dict[int, int] = {}
    bags: list[list[int]] = []
    bag_of = [0] * g.n
    for v in order.sequence:
        r = uf[v]
        if r not in node_of_root:
            node_of_root[r] = len(bags)
            bags.append([])
        bag_of[v] = node_of_root[r]
        bags[bag_of[v]].append(v)

    pos = order.position
    parent = [-1] * len(bags)
    cliques: list[tuple[int, ...]] = [()] * len(bags)
    node_depth = [depth[bag[0]] for bag in bags]
    for x, bag in enumerate(bags):
        if node_depth[x] == 0:
            continue
        above = {u for v in bag for u in g.neighbours[v] if depth[u] == depth[v] - 1}
        holders = {bag_of[u] for u in above}
        if len(holders) != 1 or not g.is_clique(above):
            raise NotKTree(
                "vertices above a depth-layer component do not form one clique",
                witness={"bag": bag, "above": sorted(above)},
            )
        parent[x] = holders.pop()
        cliques[x] = tuple(sorted(above, key=lambda u: pos[u]))
    return TreePartition(tuple(parent), tuple(tuple(b) for b in bags), tuple(cliques), tuple(node_depth))


def build_tree_partition(g: Graph, k: int, root: Optional[int] = None) -> TreePartition:
    """Tree-partition of a k-tree; `root` pins the ordering's first vertex."""
    if k < 0:
        raise BadParams("k must be >= 0")
    if root is not None and not 0 <= root < g.n:
        raise BadParams(f"root {root} not in graph")
    if g.n == 0:
        return TreePartition((-1,), ((),), ((),), (0,))
    comps = g.components()
    if len(comps) == 1:
        tp = _partition_connected(g, k, root)
    else:
        parent: list[int] = [-1]
        bags: list[tuple[int, ...]] = [()]
        cliques: list[tuple[int, ...]] = [()]
        depths: list[int] = [0]
        for comp in comps:
            sub, verts = g.subgraph(comp)
            local_root = comp.index(root) if root in comp else None
            part = _partition_connected(sub, k, local_root)
            offset = len(bags)
            for x in range(len(part.bags)):
                parent.append(0 if part.parent[x] < 0 else part.parent[x] + offset)
                bags.append(tuple(verts[v] for v in part.bags[x]))
                cliques.append(tuple(verts[v] for v in part.parent_clique[x]))
                depths.append(part.depth[x] + 1)
        tp = TreePartition(tuple(parent), tuple(bags), tuple(cliques), tuple(depths))
    log.info("build_tree_partition: n=%d k=%d nodes=%d width=%d", g.n, k, len(tp.bags), tp.width)
    return tp


# ── Verification ─────────────────────────────────────────────────────

def partition_structure(g: Graph, tp: TreePartition) -> Report:
    """Tree shape, depths, disjoint cover and the edge condition; no k-tree checks."""
    report = Report("tree_partition")
    nodes = len(tp.bags)
    if not report.check("shape", nodes > 0 and len(tp.parent) == nodes == len(tp.parent_clique) == len(tp.depth),
                        {"bags": nodes, "parent": len(tp.parent)}):
        return report

    roots = [x for x, p in enumerate(tp.parent) if p < 0]
    report.check("tree", len(roots) == 1, {"roots": roots})
    report.check("tree", all(-1 <= p < nodes and p != x for x, p in enumerate(tp.parent)), {"parent": list(tp.parent)})
    if not report.checks["tree"]:
        return report
    T = nx.Graph()
    T.add_nodes_from(range(nodes))
    T.add_edges_from((p, x) for x, p in enumerate(tp.parent) if p >= 0)
    if not report.check("tree", nx.is_tree(T), {"reason": "parent pointers do not form a tree"}):
        return report
    report.check("depth", tp.depth[roots[0]] == 0, {"node": roots[0]})
    for x, p in enumerate(tp.parent):
        if p >= 0:
            report.check("depth", tp.depth[x] == tp.depth[p] + 1, {"node": x, "parent": p})
    report.checks.setdefault("depth", True)

    bag_of: dict[int, int] = {}
    for x, bag in enumerate(tp.bags):
        for v in bag:
            report.check("cover", 0 <= v < g.n and v not in bag_of, {"vertex": v, "bag": x})
            bag_of.setdefault(v, x)
    missing = [v for v in range(g.n) if v not in bag_of]
    if not report.check("cover", not missing, {"missing": missing[:10]}):
        return report

    for u, v in g.edges:
        a, b = bag_of[u], bag_of[v]
        report.check("edges", a == b or tp.parent[a] == b or tp.parent[b] == a, {"edge": [u, v], "bags": [a, b]})
    report.checks.setdefault("edges", True)
    return report


def verify_tree_partition(g: Graph, tp: TreePartition, k: int, strict_width: bool = True) -> Report:
    report = partition_structure(g, tp)
    # the clique checks only need a tree and a full cover
    if set(report.failed()) - {"edges"}:
        return report
    bag_of = tp.bag_of()

    # property (a) and the depth-layer clique claim
    for x, bag in enumerate(tp.bags):
        p = tp.parent[x]
        if p < 0:
            report.check("parent_clique", not tp.parent_clique[x], {"node": x})
            continue
        members = set(bag)
        parent_bag = set(tp.bags[p])
        recomputed = {u for v in bag for u in g.neighbours[v] if u in parent_bag}
        given = set(tp.parent_clique[x])
        report.check("parent_clique", given == recomputed and given <= parent_bag and g.is_clique(given),
                     {"node": x, "given": sorted(given), "recomputed": sorted(recomputed)})
        above = {u for v in members for u in g.neighbours[v]
                 if u not in members and tp.depth[bag_of[u]] == tp.depth[x] - 1}
        report.check("claim", g.is_clique(above), {"node": x, "above": sorted(above)})
    report.checks.setdefault("parent_clique", True)
    report.checks.setdefault("claim", True)

    # property (b): connected (k-1)-tree bags
    inner = max(k - 1, 0)
    for x, bag in enumerate(tp.bags):
        if not bag:
            report.check("bags_ktree", tp.parent[x] < 0, {"node": x, "reason": "empty non-root bag"})
            continue
        sub, _ = g.subgraph(bag)
        try:
            kk, _ = ktree_peo(sub)
            report.check("bags_ktree", kk <= inner, {"node": x, "k": kk})
        except LayoutError as exc:
            report.check("bags_ktree", False, {"node": x, "error": type(exc).__name__})
    report.checks.setdefault("bags_ktree", True)

    bound = width_bound(k, g.max_degree, strict_width)
    report.check("width", tp.width <= bound, {"width": tp.width, "bound": bound})
    report.stats.update({"nodes": len(tp.bags), "width": tp.width, "width_bound": bound,
                         "max_depth": max(tp.depth), "max_degree": g.max_degree})
    if not report.ok:
        log.warning("tree-partition check failed: %s", report.failed())
    return report
