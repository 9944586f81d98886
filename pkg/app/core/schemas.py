"""
Wire formats. Every JSON artifact is validated here before it becomes a
domain object; envelopes carry a graph plus whatever has been built for it.
"""

import json
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from app.core.drawing3d import Drawing3D
from app.core.errors import BadParams
from app.core.graph_core import Colouring, Graph
from app.core.queue_layout import QueueLayout, StackLayout
from app.core.report import Report
from app.core.track_layout import TrackLayout
from app.core.tree_partition import TreePartition

ENVELOPE_VERSION = 1


# --- Artifacts ---

class GraphModel(BaseModel):
    n: int = Field(..., ge=0)
    edges: list[tuple[int, int]] = []
    meta: dict[str, Any] = {}

    def build(self) -> Graph:
        return Graph(self.n, tuple(self.edges), meta=dict(self.meta))


class TrackLayoutModel(BaseModel):
    mode: str = Field("proper", pattern="^(proper|improper)$")
    tracks: list[list[int]]

    def build(self) -> TrackLayout:
        return TrackLayout.from_dict(self.model_dump())


class QueueLayoutModel(BaseModel):
    order: list[int]
    queues: list[list[tuple[int, int]]]

    def build(self) -> QueueLayout:
        return QueueLayout.from_dict(self.model_dump())


class StackLayoutModel(BaseModel):
    order: list[int]
    stacks: list[list[tuple[int, int]]]

    def build(self) -> StackLayout:
        return StackLayout.from_dict(self.model_dump())


class TreePartitionModel(BaseModel):
    parent: list[int]
    bags: list[list[int]]
    parent_clique: Optional[list[list[int]]] = None
    depth: Optional[list[int]] = None

    def build(self) -> TreePartition:
        return TreePartition.from_dict(self.model_dump(exclude_none=True))


class ColouringModel(BaseModel):
    colour: list[int]
    colour_count: int = -1

    @field_validator("colour")
    @classmethod
    def non_negative(cls, v: list[int]) -> list[int]:
        if any(c < 0 for c in v):
            raise ValueError("colours must be non-negative")
        return v

    def build(self) -> Colouring:
        return Colouring(tuple(self.colour))


class DrawingModel(BaseModel):
    model_config = ConfigDict(extra="allow")

    points: list[tuple[int, int, int]]
    offset: Optional[tuple[int, int, int]] = None
    method: Optional[str] = None
    frame: Optional[tuple[int, int, int]] = None

    def build(self) -> Drawing3D:
        return Drawing3D.from_dict(self.model_dump(exclude_none=True))


class ReportModel(BaseModel):
    kind: str
    ok: bool
    checks: dict[str, bool]
    witnesses: dict[str, Any] = {}
    stats: dict[str, Any] = {}


class ReportDigest(BaseModel):
    ok: bool
    digest: str


# --- Envelope ---

class Envelope(BaseModel):
    kind: str = "graph"
    version: int = ENVELOPE_VERSION
    graph: GraphModel
    track_layout: Optional[TrackLayoutModel] = None
    queue_layout: Optional[QueueLayoutModel] = None
    stack_layout: Optional[StackLayoutModel] = None
    tree_partition: Optional[TreePartitionModel] = None
    colouring: Optional[ColouringModel] = None
    drawing: Optional[DrawingModel] = None
    reports: dict[str, ReportDigest] = {}

    def with_artifact(self, name: str, artifact, report: Optional[Report] = None) -> "Envelope":
        """Copy carrying one more artifact and, when given, its report digest."""
        data = self.model_dump(exclude_none=True)
        data[name] = artifact.to_dict()
        data["kind"] = name
        if report is not None:
            data.setdefault("reports", {})[report.kind] = {"ok": report.ok, "digest": report.digest()}
        return Envelope.model_validate(data)

    def dumps(self) -> str:
        """Canonical JSON: sorted keys, absent artifacts omitted."""
        return json.dumps(self.model_dump(mode="json", exclude_none=True), sort_keys=True, separators=(",", ":"))


def parse_envelope(text: str) -> Envelope:
    """An envelope, or a bare graph {"n", "edges"} wrapped into one."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadParams(f"input is not JSON: {exc}") from exc
    if isinstance(data, dict) and "graph" not in data and "n" in data:
        data = {"kind": "graph", "graph": data}
    try:
        return Envelope.model_validate(data)
    except ValidationError as exc:
        errors = exc.errors(include_url=False, include_context=False, include_input=False)
        raise BadParams("input does not match the envelope format", witness={"errors": errors[:5]}) from exc


def require(env: Envelope, name: str):
    """Domain object of an envelope artifact; BadParams when missing."""
    model = getattr(env, name)
    if model is None:
        raise BadParams(f"input carries no {name.replace('_', ' ')}")
    return model.build()
