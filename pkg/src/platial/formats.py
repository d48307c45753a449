"""JSON formats for place records, timelines, milestones and reports.

Geometries use a small self-defined encoding::

    {"type": "point", "coordinates": [x, y]}
    {"type": "polygon", "coordinates": [[x, y], ..., [x, y]]}
    {"type": "multi", "parts": [<point or polygon>, ...]}

with the crs taken from the file header. :func:`to_geojson` and
:func:`from_geojson` convert to and from GeoJSON geometry objects.
Timestamps are RFC 3339 UTC strings.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from platial import __version__
from platial.errors import RecordError, ValidationError
from platial.fixtures import check_fixture_metadata
from platial.mobility import MOBILITY_KINDS, Milestone, RelocationTrack
from platial.place_model import (
    CRS_VALUES,
    Geometry,
    Lifecycle,
    MeaningDimension,
    MeaningVector,
    Place,
    PlaceTimeline,
    TimeSpec,
    format_timestamp,
    parse_timestamp,
)

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class PlatialRecordFile:
    crs: str
    records: tuple[Place, ...]
    format_version: str = FORMAT_VERSION
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TimelineFile:
    crs: str
    timelines: tuple[PlaceTimeline, ...]
    # optional per-timeline annotations, keyed by place id
    mobility_kinds: dict[str, str] = field(default_factory=dict)
    comments: dict[str, str] = field(default_factory=dict)
    format_version: str = FORMAT_VERSION
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MilestoneFile:
    tracks: tuple[RelocationTrack, ...]
    format_version: str = FORMAT_VERSION
    metadata: dict = field(default_factory=dict)


# -- geometry encoding --------------------------------------------------------


def geometry_to_json(g: Geometry) -> dict:
    if g.kind == "point":
        return {"type": "point", "coordinates": list(g.coords)}
    if g.kind == "polygon":
        return {"type": "polygon", "coordinates": [list(c) for c in g.coords]}
    return {"type": "multi", "parts": [geometry_to_json(p) for p in g.parts]}


def geometry_from_json(obj: Any, crs: str) -> Geometry:
    if not isinstance(obj, dict):
        raise ValidationError("geometry must be an object")
    kind = obj.get("type")
    if kind == "point":
        return Geometry("point", tuple(obj.get("coordinates") or ()), crs=crs)
    if kind == "polygon":
        coords = obj.get("coordinates")
        if not isinstance(coords, list):
            raise ValidationError("polygon coordinates must be a list of pairs")
        return Geometry("polygon", tuple(tuple(c) if isinstance(c, list) else c for c in coords), crs=crs)
    if kind == "multi":
        parts = obj.get("parts")
        if not isinstance(parts, list):
            raise ValidationError("multi geometry needs a 'parts' list")
        return Geometry("multi", parts=tuple(geometry_from_json(p, crs) for p in parts), crs=crs)
    raise ValidationError(f"unknown geometry type {kind!r}")


def to_geojson(g: Geometry) -> dict:
    """Standard GeoJSON geometry object for ``g``."""
    if g.kind == "point":
        return {"type": "Point", "coordinates": list(g.coords)}
    if g.kind == "polygon":
        return {"type": "Polygon", "coordinates": [[list(c) for c in g.coords]]}
    kinds = {p.kind for p in g.parts}
    if kinds == {"point"}:
        return {"type": "MultiPoint", "coordinates": [list(p.coords) for p in g.parts]}
    if kinds == {"polygon"}:
        return {"type": "MultiPolygon", "coordinates": [[[list(c) for c in p.coords]] for p in g.parts]}
    return {"type": "GeometryCollection", "geometries": [to_geojson(p) for p in g.parts]}


def from_geojson(obj: dict, crs: str = "planar-m") -> Geometry:
    t = obj.get("type")
    if t == "Point":
        return Geometry.point(*obj["coordinates"], crs=crs)
    if t == "Polygon":
        rings = obj["coordinates"]
        if len(rings) != 1:
            raise ValidationError("polygons with holes are not supported")
        return Geometry("polygon", tuple(tuple(c) for c in rings[0]), crs=crs)
    if t == "MultiPoint":
        return Geometry.multi([Geometry.point(*c, crs=crs) for c in obj["coordinates"]], crs=crs)
    if t == "MultiPolygon":
        return Geometry.multi([from_geojson({"type": "Polygon", "coordinates": p}, crs) for p in obj["coordinates"]], crs=crs)
    if t == "GeometryCollection":
        return Geometry.multi([from_geojson(g, crs) for g in obj["geometries"]], crs=crs)
    raise ValidationError(f"unsupported GeoJSON geometry type {t!r}")


# -- place records ------------------------------------------------------------


def _time_to_json(t: TimeSpec) -> dict:
    return {
        "kind": t.kind,
        "start": format_timestamp(t.start),
        "end": None if t.end is None else format_timestamp(t.end),
    }


def _time_from_json(obj: Any) -> TimeSpec:
    if not isinstance(obj, dict):
        raise ValidationError("time must be an object")
    end = obj.get("end")
    return TimeSpec(
        obj.get("kind", "interval"),
        parse_timestamp(obj.get("start")),
        None if end is None else parse_timestamp(end),
    )


def _dimension_to_json(d: MeaningDimension) -> dict:
    out: dict[str, Any] = {"kind": d.kind, "value": d.value, "weight": d.weight}
    if d.range is not None:
        out["range"] = list(d.range)
    if d.levels is not None:
        out["levels"] = list(d.levels)
    if d.category is not None:
        out["category"] = d.category
    return out


def _dimension_from_json(key: str, obj: Any) -> MeaningDimension:
    if not isinstance(obj, dict):
        raise ValidationError("meaning dimension must be an object")
    rng = obj.get("range")
    levels = obj.get("levels")
    return MeaningDimension(
        key=key,
        kind=obj.get("kind"),
        value=obj.get("value"),
        weight=obj.get("weight", 1.0),
        range=None if rng is None else tuple(rng),
        levels=None if levels is None else tuple(levels),
        category=obj.get("category"),
    )


def _lifecycle_to_json(lc: Lifecycle) -> dict:
    return {
        "instantiation": lc.instantiation,
        "planned_end": None if lc.planned_end is None else format_timestamp(lc.planned_end),
        "dissolved_at": None if lc.dissolved_at is None else format_timestamp(lc.dissolved_at),
        "essence_bound_to_location": lc.essence_bound_to_location,
    }


def _lifecycle_from_json(obj: Any) -> Lifecycle:
    if obj is None:
        return Lifecycle()
    if not isinstance(obj, dict):
        raise ValidationError("lifecycle must be an object")
    pe, da = obj.get("planned_end"), obj.get("dissolved_at")
    return Lifecycle(
        instantiation=obj.get("instantiation", "planned"),
        planned_end=None if pe is None else parse_timestamp(pe),
        dissolved_at=None if da is None else parse_timestamp(da),
        essence_bound_to_location=obj.get("essence_bound_to_location", False),
    )


def place_to_json(p: Place) -> dict:
    return {
        "id": p.id,
        "level": p.level,
        "parent": p.parent,
        "time": _time_to_json(p.time),
        "space": None if p.space is None else geometry_to_json(p.space),
        "meaning": {d.key: _dimension_to_json(d) for d in p.meaning},
        "lifecycle": _lifecycle_to_json(p.lifecycle),
    }


_PLACE_KEYS = {"id", "level", "parent", "time", "space", "meaning", "lifecycle", "comment"}


def place_from_json(obj: Any, crs: str, index: int | None = None, prefix: str = "") -> Place:
    """Parse one place record, locating any failure by record index and field path."""

    def fail(path: str, exc: Exception) -> RecordError:
        return RecordError(str(exc), index, prefix + path)

    if not isinstance(obj, dict):
        raise RecordError("record must be an object", index, prefix.rstrip("."))
    unknown = set(obj) - _PLACE_KEYS
    if unknown:
        raise RecordError(f"unknown fields {sorted(unknown)}", index, prefix.rstrip("."))
    try:
        time = _time_from_json(obj.get("time"))
    except ValidationError as exc:
        raise fail("time", exc) from exc
    space = None
    if obj.get("space") is not None:
        try:
            space = geometry_from_json(obj["space"], crs)
        except ValidationError as exc:
            raise fail("space", exc) from exc
    meaning_obj = obj.get("meaning")
    if not isinstance(meaning_obj, dict):
        raise RecordError("meaning must be an object of dimensions", index, prefix + "meaning")
    dims = []
    for key, d in meaning_obj.items():
        try:
            dims.append(_dimension_from_json(key, d))
        except ValidationError as exc:
            raise fail(f"meaning.{key}", exc) from exc
    try:
        meaning = MeaningVector(tuple(dims))
    except ValidationError as exc:
        raise fail("meaning", exc) from exc
    try:
        lifecycle = _lifecycle_from_json(obj.get("lifecycle"))
    except ValidationError as exc:
        raise fail("lifecycle", exc) from exc
    try:
        return Place(
            id=obj.get("id"),
            level=obj.get("level", 0),
            time=time,
            meaning=meaning,
            space=space,
            lifecycle=lifecycle,
            parent=obj.get("parent"),
        )
    except ValidationError as exc:
        raise fail("", exc) from exc


def _load_json(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise RecordError(f"input is not UTF-8: {exc}") from exc
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise RecordError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _header(doc: Any, require_crs: bool = True) -> tuple[str, dict]:
    if not isinstance(doc, dict):
        raise RecordError("document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise RecordError(f"unrecognized format_version {version!r}", path="format_version")
    crs = doc.get("crs", "planar-m" if not require_crs else None)
    if crs not in CRS_VALUES:
        raise RecordError(f"unknown crs {crs!r}", path="crs")
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise RecordError("metadata must be an object", path="metadata")
    try:
        check_fixture_metadata(metadata)
    except ValidationError as exc:
        raise RecordError(str(exc), path="metadata") from exc
    return crs, metadata


def parse_record_file(data: bytes | str) -> PlatialRecordFile:
    doc = _load_json(data)
    crs, metadata = _header(doc)
    records = doc.get("records")
    if not isinstance(records, list):
        raise RecordError("'records' must be a list", path="records")
    places = []
    seen: set[str] = set()
    for i, r in enumerate(records):
        p = place_from_json(r, crs, i)
        if p.id in seen:
            raise RecordError(f"duplicate id {p.id!r}", i, "id")
        seen.add(p.id)
        places.append(p)
    return PlatialRecordFile(crs=crs, records=tuple(places), metadata=metadata)


def serialize_record_file(f: PlatialRecordFile) -> str:
    doc: dict[str, Any] = {"format_version": f.format_version, "crs": f.crs}
    if f.metadata:
        doc["metadata"] = f.metadata
    doc["records"] = [place_to_json(p) for p in f.records]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- timelines ----------------------------------------------------------------


def _timeline_from_json(obj: Any, crs: str, index: int) -> tuple[PlaceTimeline, str | None, str | None]:
    if not isinstance(obj, dict):
        raise RecordError("timeline must be an object", index)
    pid = obj.get("place_id")
    if not isinstance(pid, str) or not pid:
        raise RecordError("place_id must be a non-empty string", index, "place_id")
    states = obj.get("states")
    if not isinstance(states, list) or not states:
        raise RecordError("states must be a non-empty list", index, "states")
    parsed = []
    for j, s in enumerate(states):
        if isinstance(s, dict) and "id" not in s:
            s = {"id": pid, **s}
        parsed.append(place_from_json(s, crs, index, f"states[{j}]."))
    try:
        timeline = PlaceTimeline(pid, tuple(parsed))
    except ValidationError as exc:
        raise RecordError(str(exc), index, "states") from exc
    kind = obj.get("mobility_kind")
    if kind is not None and kind not in MOBILITY_KINDS:
        raise RecordError(f"mobility_kind must be one of {MOBILITY_KINDS}", index, "mobility_kind")
    return timeline, kind, obj.get("comment")


def parse_timeline_file(data: bytes | str) -> TimelineFile:
    doc = _load_json(data)
    if isinstance(doc, dict) and "place_id" in doc:
        # a bare single timeline
        doc = {"format_version": FORMAT_VERSION, "crs": doc.get("crs", "planar-m"), "timelines": [doc]}
    crs, metadata = _header(doc)
    items = doc.get("timelines")
    if not isinstance(items, list):
        raise RecordError("'timelines' must be a list", path="timelines")
    timelines, kinds, comments = [], {}, {}
    seen: set[str] = set()
    for i, obj in enumerate(items):
        t, kind, comment = _timeline_from_json(obj, crs, i)
        if t.place_id in seen:
            raise RecordError(f"duplicate timeline {t.place_id!r}", i, "place_id")
        seen.add(t.place_id)
        timelines.append(t)
        if kind is not None:
            kinds[t.place_id] = kind
        if comment is not None:
            comments[t.place_id] = comment
    return TimelineFile(crs, tuple(timelines), kinds, comments, metadata=metadata)


def serialize_timeline_file(f: TimelineFile) -> str:
    doc: dict[str, Any] = {"format_version": f.format_version, "crs": f.crs}
    if f.metadata:
        doc["metadata"] = f.metadata
    items = []
    for t in f.timelines:
        item: dict[str, Any] = {"place_id": t.place_id}
        if t.place_id in f.comments:
            item["comment"] = f.comments[t.place_id]
        if t.place_id in f.mobility_kinds:
            item["mobility_kind"] = f.mobility_kinds[t.place_id]
        item["states"] = [place_to_json(s) for s in t.states]
        items.append(item)
    doc["timelines"] = items
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- milestones ---------------------------------------------------------------


def parse_milestone_file(data: bytes | str) -> MilestoneFile:
    doc = _load_json(data)
    if isinstance(doc, list):
        doc = {"format_version": FORMAT_VERSION, "tracks": doc}
    _, metadata = _header(doc, require_crs=False)
    items = doc.get("tracks")
    if not isinstance(items, list):
        raise RecordError("'tracks' must be a list", path="tracks")
    tracks = []
    seen: set[str] = set()
    for i, obj in enumerate(items):
        if not isinstance(obj, dict):
            raise RecordError("track must be an object", i)
        ms = []
        for j, m in enumerate(obj.get("milestones") or []):
            try:
                ms.append(Milestone(m["kind"], parse_timestamp(m["at"])))
            except (ValidationError, KeyError, TypeError) as exc:
                raise RecordError(str(exc), i, f"milestones[{j}]") from exc
        try:
            track = RelocationTrack(obj.get("household_id", ""), tuple(ms), obj.get("mode", "relocation"))
        except ValidationError as exc:
            raise RecordError(str(exc), i) from exc
        if track.household_id in seen:
            raise RecordError(f"duplicate household_id {track.household_id!r}", i, "household_id")
        seen.add(track.household_id)
        tracks.append(track)
    return MilestoneFile(tuple(tracks), metadata=metadata)


def serialize_milestone_file(f: MilestoneFile) -> str:
    doc: dict[str, Any] = {"format_version": f.format_version}
    if f.metadata:
        doc["metadata"] = f.metadata
    doc["tracks"] = [
        {
            "household_id": t.household_id,
            "mode": t.mode,
            "milestones": [{"kind": m.kind, "at": format_timestamp(m.at)} for m in t.milestones],
        }
        for t in f.tracks
    ]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- generic loading ----------------------------------------------------------


def sniff_kind(doc: Any) -> str:
    """Which of the three input formats a parsed JSON document is."""
    if isinstance(doc, list):
        return "milestones"
    if isinstance(doc, dict):
        if "records" in doc:
            return "records"
        if "timelines" in doc or "place_id" in doc:
            return "timelines"
        if "tracks" in doc:
            return "milestones"
    raise RecordError("unrecognized document: expected records, timelines or tracks")


def parse_any(data: bytes | str):
    kind = sniff_kind(_load_json(data))
    parser = {"records": parse_record_file, "timelines": parse_timeline_file, "milestones": parse_milestone_file}
    return parser[kind](data)


def load_timelines(data: bytes | str) -> TimelineFile:
    """Timelines from a timeline file, or one single-state timeline per place record."""
    parsed = parse_any(data)
    if isinstance(parsed, TimelineFile):
        return parsed
    if isinstance(parsed, PlatialRecordFile):
        return TimelineFile(
            parsed.crs, tuple(PlaceTimeline(p.id, (p,)) for p in parsed.records), metadata=parsed.metadata
        )
    raise RecordError("expected place records or timelines, got milestones")


# -- reports ------------------------------------------------------------------


def _clean(obj: Any) -> Any:
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def make_report(command: str, config: dict, results: list, summary: dict, generated_at: str | None = None) -> dict:
    if generated_at is None:
        generated_at = os.environ.get("PLATIAL_REPORT_TIME") or datetime.now(timezone.utc).strftime(
            "%Y-%m-%dT%H:%M:%SZ"
        )
    return {
        "tool": "platial",
        "version": __version__,
        "command": command,
        "generated_at": generated_at,
        "config": config,
        "results": results,
        "summary": summary,
    }


def dump_report(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def write_csv_matrix(path: Path, ids: list[str], matrix: list[list[float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", *ids])
        for pid, row in zip(ids, matrix):
            w.writerow([pid, *(repr(v) for v in row)])
