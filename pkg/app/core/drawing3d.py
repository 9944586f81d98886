"""
Three-dimensional straight-line grid drawings.

Constructions place track i (numbered from 1) on the grid line
(i, i^2 mod p, *) with p the smallest prime above the track count, and the
r-th vertex of the track at height (i^3 mod p) + r*p. Four points on distinct
tracks are never coplanar mod p, so edges only meet at shared endpoints.

Verification is exact: numpy narrows candidates with bounding boxes and, for
small coordinates, with int64 coplanarity determinants; every candidate is
then decided with Python integers.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence, Union

import numpy as np

from app.config import COORD_LIMIT
from app.core.errors import BadParams, InvalidDrawing, VerificationFailed
from app.core.graph_core import Graph
from app.core.report import Report
from app.core.track_layout import IMPROPER, TrackLayout, balance

log = logging.getLogger("layout.drawing")

Point = tuple[int, int, int]

# int64 triple products stay exact below this coordinate range
_INT64_SAFE_RANGE = 2 ** 19


@dataclass(frozen=True)
class Drawing3D:
    points: tuple[Point, ...]
    meta: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        pts = tuple(tuple(int(c) for c in p) for p in self.points)
        if any(len(p) != 3 for p in pts):
            raise InvalidDrawing("every point needs three coordinates")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    def box(self) -> tuple[int, int, int]:
        """Grid points per axis of the bounding box."""
        if not self.points:
            return (0, 0, 0)
        arr = np.asarray(self.points, dtype=object)
        return tuple(int(max(arr[:, a]) - min(arr[:, a]) + 1) for a in range(3))

    @property
    def frame(self) -> tuple[int, int, int]:
        """Construction's native box when known, otherwise the bounding box."""
        return tuple(self.meta.get("frame") or self.box())

    @property
    def volume(self) -> int:
        x, y, z = self.frame
        return x * y * z

    @property
    def aspect_ratio(self) -> Fraction:
        sides = [s for s in self.frame if s > 0]
        return Fraction(max(sides), min(sides)) if sides else Fraction(1)

    def translated(self) -> tuple["Drawing3D", Point]:
        """Copy shifted so the minimum corner is the origin, and the shift applied."""
        if not self.points:
            return self, (0, 0, 0)
        low = tuple(min(p[a] for p in self.points) for a in range(3))
        meta = dict(self.meta)
        meta["offset"] = list(low)
        pts = tuple(tuple(p[a] - low[a] for a in range(3)) for p in self.points)
        return Drawing3D(pts, meta), low

    def to_dict(self) -> dict:
        moved, _ = self.translated()
        out = {"points": [list(p) for p in moved.points]}
        out.update({k: v for k, v in sorted(moved.meta.items())})
        if "frame" in out:
            out["frame"] = list(out["frame"])
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Drawing3D":
        offset = data.get("offset") or [0, 0, 0]
        pts = tuple(tuple(int(c) + int(o) for c, o in zip(p, offset)) for p in data["points"])
        meta = {k: v for k, v in data.items() if k not in ("points", "offset")}
        return cls(pts, meta)


# ── Exact predicates ─────────────────────────────────────────────────

def _sub(a: Sequence[int], b: Sequence[int]) -> Point:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a: Sequence[int], b: Sequence[int]) -> Point:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def on_open_segment(p: Sequence[int], a: Sequence[int], b: Sequence[int]) -> bool:
    ab, ap = _sub(b, a), _sub(p, a)
    if _cross(ab, ap) != (0, 0, 0):
        return False
    t = _dot(ap, ab)
    return 0 < t < _dot(ab, ab)


def segments_cross(p0: Sequence[int], p1: Sequence[int], q0: Sequence[int], q1: Sequence[int]) -> bool:
    """Whether segments p0p1 and q0q1 meet anywhere other than a shared endpoint."""
    p0, p1, q0, q1 = tuple(p0), tuple(p1), tuple(q0), tuple(q1)
    shared = {p0, p1} & {q0, q1}
    if shared:
        s = shared.pop()
        a = p1 if p0 == s else p0
        b = q1 if q0 == s else q0
        da, db = _sub(a, s), _sub(b, s)
        return _cross(da, db) == (0, 0, 0) and _dot(da, db) > 0
    d1, d2, w = _sub(p1, p0), _sub(q1, q0), _sub(q0, p0)
    if _dot(w, _cross(d1, d2)) != 0:
        return False
    normal = _cross(d1, d2)
    if normal != (0, 0, 0):
        big_n = _dot(normal, normal)
        s = _dot(_cross(w, d2), normal)
        u = _dot(_cross(w, d1), normal)
        return 0 <= s <= big_n and 0 <= u <= big_n
    if _cross(w, d1) != (0, 0, 0):
        return False
    length = _dot(d1, d1)
    t0, t1 = _dot(w, d1), _dot(_sub(q1, p0), d1)
    return max(min(t0, t1), 0) <= min(max(t0, t1), length)


def edge_bound(box: tuple[int, int, int]) -> int:
    x, y, z = box
    if min(box) <= 0:
        return 0
    return (2 * x - 1) * (2 * y - 1) * (2 * z - 1) - x * y * z


# ── Verification ─────────────────────────────────────────────────────

def _candidate_pairs(pts: np.ndarray, edges: np.ndarray, small: bool) -> list[tuple[int, int]]:
    """Edge index pairs whose boxes meet, and, for small coordinates, that are coplanar."""
    a, b = pts[edges[:, 0]], pts[edges[:, 1]]
    low, high = np.minimum(a, b), np.maximum(a, b)
    out: list[tuple[int, int]] = []
    for i in range(len(edges) - 1):
        rest = slice(i + 1, None)
        meet = np.all((low[rest] <= high[i]) & (low[i] <= high[rest]), axis=1)
        js = np.nonzero(meet)[0] + i + 1
        if small and len(js):
            d1 = b[i] - a[i]
            d2 = b[js] - a[js]
            w = a[js] - a[i]
            det = np.einsum("ij,ij->i", w, np.cross(np.broadcast_to(d1, d2.shape), d2))
            js = js[det == 0]
        out.extend((i, int(j)) for j in js)
    return out


def verify_drawing(g: Graph, d: Drawing3D, coord_limit: Optional[int] = None) -> Report:
    limit = COORD_LIMIT if coord_limit is None else coord_limit
    report = Report("drawing")
    if not report.check("cover", d.n == g.n, {"expected": g.n, "got": d.n}):
        return report
    seen: dict[Point, int] = {}
    for v, p in enumerate(d.points):
        report.check("distinct", p not in seen, {"vertices": [seen.get(p), v], "point": list(p)})
        seen.setdefault(p, v)
    report.check("coordinates", all(abs(c) <= limit for p in d.points for c in p), {"limit": limit})
    if not report.ok:
        return report

    box = d.box()
    report.check("edge_bound", g.m <= edge_bound(box), {"edges": g.m, "bound": edge_bound(box)})
    if g.m == 0:
        report.checks.update({"vertex_on_edge": True, "crossing": True})
        report.stats.update(_drawing_stats(d, box, 0))
        return report

    pts = np.asarray(d.points, dtype=np.int64)
    edges = np.asarray(g.edges, dtype=np.int64)
    spread = int(pts.max() - pts.min())
    small = spread < _INT64_SAFE_RANGE

    for u, v in g.edges:
        lo = np.minimum(pts[u], pts[v])
        hi = np.maximum(pts[u], pts[v])
        inside = np.nonzero(np.all((pts >= lo) & (pts <= hi), axis=1))[0]
        for x in inside:
            x = int(x)
            if x not in (u, v) and on_open_segment(d.points[x], d.points[u], d.points[v]):
                report.check("vertex_on_edge", False, {"vertex": x, "edge": [u, v]})
    report.checks.setdefault("vertex_on_edge", True)

    crossings = 0
    for i, j in _candidate_pairs(pts, edges, small):
        (u, v), (x, y) = g.edges[i], g.edges[j]
        if segments_cross(d.points[u], d.points[v], d.points[x], d.points[y]):
            crossings += 1
            report.check("crossing", False, {"edges": [[u, v], [x, y]]})
    report.checks.setdefault("crossing", True)
    report.stats.update(_drawing_stats(d, box, crossings))
    if not report.ok:
        log.warning("drawing check failed: %s", report.failed())
    return report


def _drawing_stats(d: Drawing3D, box: tuple[int, int, int], crossings: int) -> dict:
    return {
        "box": list(box),
        "frame": list(d.frame),
        "volume": d.volume,
        "aspect_ratio": str(d.aspect_ratio),
        "crossings": crossings,
    }


# ── Constructions ────────────────────────────────────────────────────

def smallest_prime_gt(k: int) -> int:
    if k < 1:
        raise BadParams("k must be >= 1")
    p = k + 1
    while any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        p += 1
    return p


def _track_point(i: int, rank: int, p: int) -> Point:
    return (i, i * i % p, i ** 3 % p + rank * p)


def draw_from_track(g: Graph, L: TrackLayout) -> Drawing3D:
    """Works for proper and improper layouts; box within k x p x p*n' with p <= 2k."""
    if L.n != g.n:
        raise BadParams("track layout does not cover the graph")
    k = L.t
    p = smallest_prime_gt(max(k, 1))
    points: list[Optional[Point]] = [None] * g.n
    for i, track in enumerate(L.tracks, start=1):
        for rank, v in enumerate(track):
            points[v] = _track_point(i, rank, p)
    longest = max((len(t) for t in L.tracks), default=0)
    meta = {"method": "track", "prime": p, "frame": [k, p, p * longest], "tracks": k}
    d = Drawing3D(tuple(points), meta)
    log.info("draw_from_track: n=%d tracks=%d prime=%d frame=%s", g.n, k, p, meta["frame"])
    return d


def track_from_drawing(g: Graph, d: Drawing3D) -> TrackLayout:
    """Grid columns (x, y), each ordered by z, as an improper track layout."""
    if d.n != g.n:
        raise InvalidDrawing(f"drawing has {d.n} points for {g.n} vertices")
    if len(set(d.points)) != d.n:
        raise InvalidDrawing("drawing has coincident points")
    columns: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for v, (x, y, z) in enumerate(d.points):
        columns.setdefault((x, y), []).append((z, v))
    keys = sorted(columns)
    return TrackLayout(tuple(tuple(v for _, v in sorted(columns[c])) for c in keys), tuple(keys), IMPROPER)


def moment_curve(g: Graph) -> Drawing3D:
    pts = tuple((i, i * i, i ** 3) for i in range(1, g.n + 1))
    n = g.n
    return Drawing3D(pts, {"method": "moment", "frame": [n, n * n, n ** 3] if n else [0, 0, 0]})


def cohen_mod_p(g: Graph) -> Drawing3D:
    p = smallest_prime_gt(max(g.n, 1))
    pts = tuple(_track_point(i, 0, p) for i in range(1, g.n + 1))
    return Drawing3D(pts, {"method": "cohen", "prime": p, "frame": [g.n, p, p] if g.n else [0, 0, 0]})


def draw_balanced(g: Graph, L: TrackLayout) -> Drawing3D:
    """balance(L, t) then draw: box within 2t x 4t x 4t*ceil(n/t)."""
    if L.t == 0:
        return draw_from_track(g, L)
    d = draw_from_track(g, balance(L, L.t))
    d.meta.update({"method": "balanced", "source_tracks": L.t})
    return d


def draw_aspect(g: Graph, L: TrackLayout, r: Union[int, str, Fraction]) -> Drawing3D:
    """
    balance(L, n/r) then draw, at most c = ceil(r) vertices per track.
    Frame 2n/r x 4n/r x 4cn/r: volume <= 32n^3 c/r^3 and aspect ratio <= 2c,
    i.e. 32n^3/r^2 and 2r for integer r. Requires a rational 1 <= r <= n/t.
    """
    if isinstance(r, bool):
        raise BadParams(f"r must be rational, got {r!r}")
    try:
        r = Fraction(r)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise BadParams(f"r must be rational, got {r!r}") from exc
    if r < 1 or r * L.t > g.n:
        raise BadParams(f"r must satisfy 1 <= r <= n/t = {g.n}/{L.t}", witness={"r": str(r), "n": g.n, "t": L.t})
    c = math.ceil(r)
    d = draw_from_track(g, balance(L, g.n / r))
    d.meta.update({"method": "aspect", "r": int(r) if r.denominator == 1 else str(r), "source_tracks": L.t})
    n = g.n
    if d.volume * r ** 3 > 32 * n ** 3 * c or d.aspect_ratio > 2 * c:
        raise VerificationFailed("aspect construction exceeded its bounds", witness={"frame": d.frame, "r": str(r)})
    return d
