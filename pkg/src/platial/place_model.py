"""Core value types for places: level, time, space and meaning.

A :class:`Place` is one platial state. Every other module consumes these
types, so they are immutable and validated on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from typing import Iterable, Iterator, Literal

import shapely
from shapely.geometry import LinearRing, Point, Polygon
from shapely.ops import unary_union

from platial.errors import CRSMismatchError, MissingGeometryError, ValidationError

Coord = tuple[float, float]
CRS = Literal["planar-m", "wgs84-deg"]

CRS_VALUES = ("planar-m", "wgs84-deg")
TIME_KINDS = ("instant", "interval")
GEOMETRY_KINDS = ("point", "polygon", "multi")
DIMENSION_KINDS = ("numeric", "ordinal", "categorical", "text")
DIMENSION_CATEGORIES = ("economic", "emotional", "risk", "other")
INSTANTIATIONS = ("planned", "instantaneous")

EARTH_RADIUS_M = 6_371_008.8


# -- time ---------------------------------------------------------------------


def parse_timestamp(text: str) -> int:
    """RFC 3339 timestamp -> integer milliseconds since the Unix epoch (UTC)."""
    if not isinstance(text, str):
        raise ValidationError(f"timestamp must be a string, got {type(text).__name__}")
    s = text.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(s)
    except ValueError as exc:
        raise ValidationError(f"not an RFC 3339 timestamp: {text!r}") from exc
    if dt.tzinfo is None:
        raise ValidationError(f"timestamp lacks a UTC offset: {text!r}")
    delta = dt - datetime(1970, 1, 1, tzinfo=timezone.utc)
    return (delta.days * 86_400 + delta.seconds) * 1000 + delta.microseconds // 1000


def format_timestamp(ms: int) -> str:
    seconds, millis = divmod(ms, 1000)
    dt = datetime(1970, 1, 1, tzinfo=timezone.utc) + timedelta(seconds=seconds)
    base = dt.strftime("%Y-%m-%dT%H:%M:%S")
    return f"{base}.{millis:03d}Z" if millis else f"{base}Z"


@dataclass(frozen=True)
class TimeSpec:
    """A time stamp or an interval, in integer milliseconds since epoch.

    An interval with ``end=None`` is open-ended.
    """

    kind: str
    start: int
    end: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in TIME_KINDS:
            raise ValidationError(f"time kind must be one of {TIME_KINDS}, got {self.kind!r}")
        for name in ("start", "end"):
            v = getattr(self, name)
            if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
                raise ValidationError(f"time {name} must be integer milliseconds")
        if self.kind == "instant" and self.end is not None:
            raise ValidationError("instant time spec cannot have an end")
        if self.end is not None and self.start > self.end:
            raise ValidationError(
                f"interval start {format_timestamp(self.start)} is after end {format_timestamp(self.end)}"
            )

    @classmethod
    def instant(cls, at: int | str) -> TimeSpec:
        return cls("instant", _as_ms(at))

    @classmethod
    def interval(cls, start: int | str, end: int | str | None = None) -> TimeSpec:
        return cls("interval", _as_ms(start), None if end is None else _as_ms(end))

    @property
    def upper(self) -> float:
        """Upper bound of the covered extent; ``inf`` for open intervals."""
        if self.kind == "instant":
            return float(self.start)
        return math.inf if self.end is None else float(self.end)


def _as_ms(v: int | str) -> int:
    return parse_timestamp(v) if isinstance(v, str) else v


def temporal_gap(a: TimeSpec, b: TimeSpec) -> float:
    """Seconds between two time specs; 0 when they overlap or touch."""
    gap_ms = max(0.0, b.start - a.upper, a.start - b.upper)
    return gap_ms / 1000.0


# -- geometry -----------------------------------------------------------------


def _signed_area(ring: tuple[Coord, ...]) -> float:
    s = 0.0
    for (x0, y0), (x1, y1) in zip(ring, ring[1:]):
        s += x0 * y1 - x1 * y0
    return s / 2.0


@dataclass(frozen=True)
class Geometry:
    """Crisp point, single-ring polygon, or multi-part geometry.

    Polygons are stored closed and counter-clockwise. Multi parts are
    points or polygons, never nested multis.
    """

    kind: str
    coords: tuple = ()
    parts: tuple[Geometry, ...] = ()
    crs: str = "planar-m"

    def __post_init__(self) -> None:
        if self.crs not in CRS_VALUES:
            raise ValidationError(f"crs must be one of {CRS_VALUES}, got {self.crs!r}")
        if self.kind == "point":
            x, y = _coord(self.coords)
            object.__setattr__(self, "coords", (x, y))
            if self.crs == "wgs84-deg" and not (-180 <= x <= 180 and -90 <= y <= 90):
                raise ValidationError(f"wgs84 point out of range: {(x, y)}")
        elif self.kind == "polygon":
            ring = tuple(_coord(c) for c in self.coords)
            if len(ring) < 4:
                raise ValidationError("polygon ring needs at least 4 vertices (closed)")
            if ring[0] != ring[-1]:
                raise ValidationError("polygon ring is not closed (first != last)")
            area = _signed_area(ring)
            if area != 0.0 and not LinearRing(ring).is_simple:
                raise ValidationError("polygon ring is self-intersecting")
            if area < 0:
                ring = ring[::-1]
            object.__setattr__(self, "coords", ring)
        elif self.kind == "multi":
            if not self.parts:
                raise ValidationError("multi geometry needs at least one part")
            for p in self.parts:
                if not isinstance(p, Geometry) or p.kind not in ("point", "polygon"):
                    raise ValidationError("multi parts must be point or polygon geometries")
                if p.crs != self.crs:
                    raise ValidationError("all multi parts must share one crs")
            object.__setattr__(self, "parts", tuple(self.parts))
        else:
            raise ValidationError(f"geometry kind must be one of {GEOMETRY_KINDS}, got {self.kind!r}")

    @classmethod
    def point(cls, x: float, y: float, crs: str = "planar-m") -> Geometry:
        return cls("point", (x, y), crs=crs)

    @classmethod
    def polygon(cls, ring: Iterable[Coord], crs: str = "planar-m") -> Geometry:
        ring = tuple(tuple(c) for c in ring)
        if ring and ring[0] != ring[-1]:
            ring = ring + (ring[0],)
        return cls("polygon", ring, crs=crs)

    @classmethod
    def box(cls, x0: float, y0: float, x1: float, y1: float, crs: str = "planar-m") -> Geometry:
        return cls.polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], crs=crs)

    @classmethod
    def multi(cls, parts: Iterable[Geometry], crs: str | None = None) -> Geometry:
        flat: list[Geometry] = []
        for p in parts:
            flat.extend(p.parts if p.kind == "multi" else (p,))
        if crs is None:
            crs = flat[0].crs if flat else "planar-m"
        return cls("multi", parts=tuple(flat), crs=crs)

    def simple_parts(self) -> tuple[Geometry, ...]:
        return self.parts if self.kind == "multi" else (self,)

    def translate(self, dx: float, dy: float) -> Geometry:
        if self.kind == "point":
            x, y = self.coords
            return replace(self, coords=(x + dx, y + dy))
        if self.kind == "polygon":
            return replace(self, coords=tuple((x + dx, y + dy) for x, y in self.coords))
        return replace(self, parts=tuple(p.translate(dx, dy) for p in self.parts))

    def to_shapely(self) -> shapely.Geometry:
        if self.kind == "point":
            return Point(self.coords)
        if self.kind == "polygon":
            return Polygon(self.coords)
        return unary_union([p.to_shapely() for p in self.parts])


def _coord(c) -> Coord:
    try:
        x, y = c
        x, y = float(x), float(y)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"coordinate must be a pair of numbers, got {c!r}") from exc
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValidationError(f"coordinate must be finite, got {(x, y)}")
    return (x, y)


class Centroid(tuple):
    """An ``(x, y)`` pair that also records whether it came from a fallback."""

    degenerate: bool

    def __new__(cls, x: float, y: float, degenerate: bool = False) -> Centroid:
        self = super().__new__(cls, (x, y))
        self.degenerate = degenerate
        return self

    @property
    def x(self) -> float:
        return self[0]

    @property
    def y(self) -> float:
        return self[1]


def _ring_centroid(ring: tuple[Coord, ...]) -> tuple[float, float, float]:
    """Shoelace centroid; returns (cx, cy, signed area)."""
    # shift to the first vertex to limit cancellation on large coordinates
    ox, oy = ring[0]
    a = cx = cy = 0.0
    for (x0, y0), (x1, y1) in zip(ring, ring[1:]):
        x0, y0, x1, y1 = x0 - ox, y0 - oy, x1 - ox, y1 - oy
        cross = x0 * y1 - x1 * y0
        a += cross
        cx += (x0 + x1) * cross
        cy += (y0 + y1) * cross
    a /= 2.0
    if a == 0.0:
        return ox, oy, 0.0
    return cx / (6.0 * a) + ox, cy / (6.0 * a) + oy, a


def _vertex_mean(ring: tuple[Coord, ...]) -> Coord:
    pts = ring[:-1]
    return (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))


def centroid(g: Geometry) -> Centroid:
    """Area-weighted centroid.

    Zero-area polygons fall back to the vertex mean and come back with
    ``degenerate=True``. In a multi geometry point parts carry no weight
    unless every part is a point, in which case the arithmetic mean is used.
    """
    if g.kind == "point":
        return Centroid(*g.coords)
    if g.kind == "polygon":
        cx, cy, a = _ring_centroid(g.coords)
        if a == 0.0:
            return Centroid(*_vertex_mean(g.coords), degenerate=True)
        return Centroid(cx, cy)

    polys = [p for p in g.parts if p.kind == "polygon"]
    if not polys:
        n = len(g.parts)
        return Centroid(sum(p.coords[0] for p in g.parts) / n, sum(p.coords[1] for p in g.parts) / n)
    total = sx = sy = 0.0
    for p in polys:
        cx, cy, a = _ring_centroid(p.coords)
        total += a
        sx += cx * a
        sy += cy * a
    if total == 0.0:
        means = [_vertex_mean(p.coords) for p in polys]
        return Centroid(
            sum(m[0] for m in means) / len(means),
            sum(m[1] for m in means) / len(means),
            degenerate=True,
        )
    return Centroid(sx / total, sy / total)


def area(g: Geometry) -> float:
    """Planar area; overlapping multi parts are counted once."""
    if g.crs != "planar-m" and g.kind != "point":
        raise CRSMismatchError("area of wgs84 geometries is undefined: project first")
    if g.kind == "point":
        return 0.0
    if g.kind == "polygon":
        return abs(_signed_area(g.coords))
    return float(g.to_shapely().area)


def point_distance(p: Coord, q: Coord, crs: str = "planar-m") -> float:
    """Metres between two coordinates (haversine for wgs84 degrees)."""
    if crs == "planar-m":
        return math.hypot(p[0] - q[0], p[1] - q[1])
    lon1, lat1, lon2, lat2 = map(math.radians, (p[0], p[1], q[0], q[1]))
    h = math.sin((lat2 - lat1) / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def centroid_distance(a: Geometry, b: Geometry) -> float:
    if a.crs != b.crs:
        raise CRSMismatchError(f"cannot compare geometries in {a.crs} and {b.crs}")
    return point_distance(centroid(a), centroid(b), a.crs)


def geometry_change(a: Geometry, b: Geometry, align_centroids: bool = False) -> float:
    """Fraction of the union not shared by both shapes, in [0, 1].

    With ``align_centroids`` the second shape is first translated onto the
    first one's centroid, so only change of shape is measured.
    """
    if a.crs != b.crs:
        raise CRSMismatchError(f"cannot compare geometries in {a.crs} and {b.crs}")
    if a.crs == "wgs84-deg" and (a.kind != "point" or b.kind != "point"):
        raise CRSMismatchError("polygon overlay needs planar coordinates: project first")
    if align_centroids:
        ca, cb = centroid(a), centroid(b)
        b = b.translate(ca[0] - cb[0], ca[1] - cb[1])
    sa, sb = a.to_shapely(), b.to_shapely()
    union_area = sa.union(sb).area
    if union_area == 0.0:
        # both shapes have no area: compare positions
        scale = 1.0 + max(abs(v) for v in sa.bounds + sb.bounds)
        return 0.0 if sa.hausdorff_distance(sb) <= 1e-9 * scale else 1.0
    frac = sa.symmetric_difference(sb).area / union_area
    return min(1.0, max(0.0, frac))


# -- meaning ------------------------------------------------------------------


@dataclass(frozen=True)
class MeaningDimension:
    """One weighted key/value semantic attribute of a place."""

    key: str
    kind: str
    value: object
    weight: float = 1.0
    range: tuple[float, float] | None = None
    levels: tuple[str, ...] | None = None
    category: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.key, str) or not self.key:
            raise ValidationError("meaning key must be a non-empty string")
        if self.kind not in DIMENSION_KINDS:
            raise ValidationError(f"{self.key}: kind must be one of {DIMENSION_KINDS}, got {self.kind!r}")
        w = self.weight
        if isinstance(w, bool) or not isinstance(w, (int, float)) or not math.isfinite(w) or w < 0:
            raise ValidationError(f"{self.key}: weight must be a finite non-negative number")
        object.__setattr__(self, "weight", float(w))
        if self.category is not None and self.category not in DIMENSION_CATEGORIES:
            raise ValidationError(f"{self.key}: category must be one of {DIMENSION_CATEGORIES}")

        if self.kind == "numeric":
            if self.range is None:
                raise ValidationError(f"{self.key}: numeric dimension requires a range")
            lo, hi = (float(v) for v in self.range)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValidationError(f"{self.key}: numeric range must satisfy lo < hi")
            object.__setattr__(self, "range", (lo, hi))
            v = self.value
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValidationError(f"{self.key}: numeric value must be a finite number")
            if not lo <= v <= hi:
                raise ValidationError(f"{self.key}: value {v} outside range [{lo}, {hi}]")
            object.__setattr__(self, "value", float(v))
        elif self.kind == "ordinal":
            if not self.levels:
                raise ValidationError(f"{self.key}: ordinal dimension requires levels")
            levels = tuple(self.levels)
            if len(set(levels)) != len(levels):
                raise ValidationError(f"{self.key}: ordinal levels must be unique")
            object.__setattr__(self, "levels", levels)
            if self.value not in levels:
                raise ValidationError(f"{self.key}: value {self.value!r} is not one of {levels}")
        elif not isinstance(self.value, str):
            raise ValidationError(f"{self.key}: {self.kind} value must be a string")

    @classmethod
    def numeric(cls, key: str, value: float, lo: float, hi: float, weight: float = 1.0, category: str | None = None):
        return cls(key, "numeric", value, weight, range=(lo, hi), category=category)

    @classmethod
    def ordinal(cls, key: str, value: str, levels: Iterable[str], weight: float = 1.0, category: str | None = None):
        return cls(key, "ordinal", value, weight, levels=tuple(levels), category=category)

    @classmethod
    def categorical(cls, key: str, value: str, weight: float = 1.0, category: str | None = None):
        return cls(key, "categorical", value, weight, category=category)

    @classmethod
    def text(cls, key: str, value: str, weight: float = 1.0, category: str | None = None):
        return cls(key, "text", value, weight, category=category)


@dataclass(frozen=True)
class MeaningVector:
    dims: tuple[MeaningDimension, ...]

    def __post_init__(self) -> None:
        dims = tuple(self.dims)
        object.__setattr__(self, "dims", dims)
        keys = [d.key for d in dims]
        if len(set(keys)) != len(keys):
            dup = sorted({k for k in keys if keys.count(k) > 1})
            raise ValidationError(f"duplicate meaning keys: {dup}")
        if not any(d.weight > 0 for d in dims):
            raise ValidationError("meaning vector needs at least one dimension with weight > 0")

    @classmethod
    def of(cls, *dims: MeaningDimension) -> MeaningVector:
        return cls(tuple(dims))

    def __iter__(self) -> Iterator[MeaningDimension]:
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __contains__(self, key: object) -> bool:
        return any(d.key == key for d in self.dims)

    def get(self, key: str) -> MeaningDimension | None:
        for d in self.dims:
            if d.key == key:
                return d
        return None

    def as_dict(self) -> dict[str, MeaningDimension]:
        return {d.key: d for d in self.dims}

    def scaled(self, factor: float) -> MeaningVector:
        """Same vector with every weight multiplied by ``factor``."""
        return MeaningVector(tuple(replace(d, weight=d.weight * factor) for d in self.dims))


# -- places -------------------------------------------------------------------


@dataclass(frozen=True)
class Lifecycle:
    instantiation: str = "planned"
    planned_end: int | None = None
    dissolved_at: int | None = None
    # declared for places whose meaning is tied to their location
    essence_bound_to_location: bool = False

    def __post_init__(self) -> None:
        if self.instantiation not in INSTANTIATIONS:
            raise ValidationError(f"instantiation must be one of {INSTANTIATIONS}, got {self.instantiation!r}")
        if not isinstance(self.essence_bound_to_location, bool):
            raise ValidationError("essence_bound_to_location must be a boolean")


@dataclass(frozen=True)
class Place:
    """One platial state: level of detail, time, space and meaning."""

    id: str
    level: int
    time: TimeSpec
    meaning: MeaningVector
    space: Geometry | None = None
    lifecycle: Lifecycle = field(default_factory=Lifecycle)
    parent: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("place id must be a non-empty string")
        if isinstance(self.level, bool) or not isinstance(self.level, int) or self.level < 0:
            raise ValidationError(f"{self.id}: level must be a non-negative integer")
        if self.parent is not None and (not isinstance(self.parent, str) or not self.parent):
            raise ValidationError(f"{self.id}: parent must be a non-empty string or absent")
        d = self.lifecycle.dissolved_at
        if d is not None and d < self.time.start:
            raise ValidationError(f"{self.id}: dissolved_at precedes the state's time start")

    def require_space(self) -> Geometry:
        if self.space is None:
            raise MissingGeometryError(f"place {self.id!r} has no explicit geometry")
        return self.space


@dataclass(frozen=True)
class PlaceTimeline:
    """Ordered states of one place identity."""

    place_id: str
    states: tuple[Place, ...]

    def __post_init__(self) -> None:
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        if not states:
            raise ValidationError(f"timeline {self.place_id!r} has no states")
        for i, s in enumerate(states):
            if s.id != self.place_id:
                raise ValidationError(f"timeline {self.place_id!r}: state {i} has id {s.id!r}")
        for i, (s0, s1) in enumerate(zip(states, states[1:])):
            if s1.time.start < s0.time.start:
                raise ValidationError(f"timeline {self.place_id!r}: state {i + 1} starts before state {i}")

    @classmethod
    def from_states(cls, states: Iterable[Place]) -> PlaceTimeline:
        """Build a timeline, sorting states by start time (stable)."""
        states = sorted(states, key=lambda s: s.time.start)
        if not states:
            raise ValidationError("timeline has no states")
        return cls(states[0].id, tuple(states))

    def __len__(self) -> int:
        return len(self.states)

    def pairs(self) -> Iterator[tuple[int, Place, Place]]:
        for i in range(len(self.states) - 1):
            yield i, self.states[i], self.states[i + 1]


@dataclass(frozen=True)
class SpaceTimeAnchor:
    """The exact space-time location that subjective reports deviate from."""

    coord: Coord
    time: TimeSpec
    crs: str = "planar-m"

    def __post_init__(self) -> None:
        object.__setattr__(self, "coord", _coord(self.coord))
        if self.crs not in CRS_VALUES:
            raise ValidationError(f"crs must be one of {CRS_VALUES}")
