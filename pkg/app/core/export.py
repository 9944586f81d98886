"""
Exporters: OBJ and SVG for drawings, CSV for stats rows. Drawings are
translated to the origin first; SVG is a picture only.
"""

import io
import logging
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from app.core.drawing3d import Drawing3D  # noqa: E402
from app.core.graph_core import Graph  # noqa: E402

log = logging.getLogger("layout.export")

plt.rcParams["svg.hashsalt"] = "tracklayout"

# stats row columns, in output order
CSV_COLUMNS = [
    "family", "n", "m", "seed", "k",
    "tracks", "queues", "max_span", "stacks",
    "box_x", "box_y", "box_z", "volume", "aspect_ratio", "crossings",
    "tn_le_t_k", "qn_le_tn_minus_1", "tracks_le_pw_plus_1", "track_from_queue_le_bound",
    "drawing_box_ok", "edge_bound_ok", "verified",
]


def to_obj(g: Graph, d: Drawing3D) -> str:
    """Wavefront OBJ: one `v` per vertex, one `l` per edge (1-based)."""
    moved, offset = d.translated()
    lines = [f"# {g.n} vertices, {g.m} edges, offset {offset[0]} {offset[1]} {offset[2]}"]
    lines += [f"v {x} {y} {z}" for x, y, z in moved.points]
    lines += [f"l {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def to_svg(g: Graph, d: Drawing3D, title: str = "") -> str:
    moved, _ = d.translated()
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    ax.view_init(elev=35.264, azim=45)
    for u, v in g.edges:
        (x0, y0, z0), (x1, y1, z1) = moved.points[u], moved.points[v]
        ax.plot([x0, x1], [y0, y1], [z0, z1], linewidth=0.8, color="#206095")
    if moved.points:
        xs, ys, zs = zip(*moved.points)
        ax.scatter(xs, ys, zs, s=12, color="#871a5b", depthshade=False)
    try:
        ax.set_box_aspect((1, 1, 1))
    except AttributeError:
        pass
    if title:
        ax.set_title(title)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    log.debug("to_svg: %d vertices, %d edges", g.n, g.m)
    return buf.getvalue()


def to_csv(rows: Iterable[dict]) -> str:
    """Known columns first in fixed order, then any others sorted."""
    df = pd.DataFrame(list(rows))
    extra = sorted(c for c in df.columns if c not in CSV_COLUMNS)
    df = df.reindex(columns=[c for c in CSV_COLUMNS if c in df.columns] + extra)
    return df.to_csv(index=False, lineterminator="\n")
