"""Multidimensional place similarity, report variability and observables.

Similarity combines a spatial, a temporal and a semantic distance, each
scaled into [0, 1], with user weights normalised to sum to one. Variability
measures how far a subjective report (where/when a respondent places
something) lies from an exact space-time anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean
from typing import Sequence

from platial.errors import SchemaConflictError, ValidationError
from platial.place_model import (
    Coord,
    MeaningDimension,
    MeaningVector,
    Place,
    SpaceTimeAnchor,
    TimeSpec,
    centroid_distance,
    point_distance,
    temporal_gap,
)


@dataclass(frozen=True)
class SimilarityWeights:
    w_spatial: float = 1.0
    w_temporal: float = 1.0
    w_semantic: float = 1.0
    spatial_scale: float = 1000.0  # metres
    temporal_scale: float = 3600.0  # seconds

    def __post_init__(self) -> None:
        ws = (self.w_spatial, self.w_temporal, self.w_semantic)
        if any(not math.isfinite(w) or w < 0 for w in ws):
            raise ValidationError("similarity weights must be finite and non-negative")
        if sum(ws) <= 0:
            raise ValidationError("at least one similarity weight must be positive")
        for name in ("spatial_scale", "temporal_scale"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ValidationError(f"{name} must be a positive finite number")

    def normalized(self) -> tuple[float, float, float]:
        total = self.w_spatial + self.w_temporal + self.w_semantic
        return self.w_spatial / total, self.w_temporal / total, self.w_semantic / total


def _dimension_distance(a: MeaningDimension, b: MeaningDimension) -> float:
    if a.kind != b.kind:
        raise SchemaConflictError(f"meaning key {a.key!r} is {a.kind} in one vector and {b.kind} in the other")
    if a.kind == "numeric":
        if a.range != b.range:
            raise SchemaConflictError(f"meaning key {a.key!r} declares ranges {a.range} and {b.range}")
        lo, hi = a.range
        return min(1.0, abs(a.value - b.value) / (hi - lo))
    if a.kind == "ordinal":
        if a.levels != b.levels:
            raise SchemaConflictError(f"meaning key {a.key!r} declares different ordinal levels")
        k = len(a.levels)
        if k == 1:
            return 0.0
        return abs(a.levels.index(a.value) - a.levels.index(b.value)) / (k - 1)
    return 0.0 if a.value == b.value else 1.0


def semantic_distance(a: MeaningVector, b: MeaningVector) -> float:
    """Weighted mean of per-dimension distances over the union of keys.

    A key present in only one vector contributes the maximal distance 1
    with that vector's declared weight. A shared key is weighted by the
    mean of its two declared weights.
    """
    da, db = a.as_dict(), b.as_dict()
    num = den = 0.0
    for key in sorted(da.keys() | db.keys()):
        x, y = da.get(key), db.get(key)
        if x is None or y is None:
            w = (x or y).weight
            d = 1.0
        else:
            w = (x.weight + y.weight) / 2.0
            d = _dimension_distance(x, y)
        num += w * d
        den += w
    return min(1.0, num / den)


def platial_similarity(a: Place, b: Place, w: SimilarityWeights) -> float:
    ga, gb = a.require_space(), b.require_space()
    ws, wt, wm = w.normalized()
    d_space = min(1.0, centroid_distance(ga, gb) / w.spatial_scale)
    d_time = min(1.0, temporal_gap(a.time, b.time) / w.temporal_scale)
    d_meaning = semantic_distance(a.meaning, b.meaning)
    return 1.0 - (ws * d_space + wt * d_time + wm * d_meaning)


def similarity_matrix(places: Sequence[Place], w: SimilarityWeights) -> list[list[float]]:
    n = len(places)
    out = [[1.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            out[i][j] = out[j][i] = platial_similarity(places[i], places[j], w)
    return out


# -- subjective reports -------------------------------------------------------


@dataclass(frozen=True)
class PlaceReport:
    """Where and when one respondent places something, and what it means to them."""

    respondent: str
    coord: Coord
    time: TimeSpec
    meaning: MeaningVector | None = None
    reported_distance: float | None = None  # metres
    reported_duration: float | None = None  # seconds
    crs: str = "planar-m"

    def __post_init__(self) -> None:
        for name in ("reported_distance", "reported_duration"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{self.respondent}: {name} must be positive and finite")


@dataclass(frozen=True)
class Variability:
    spatial_component: float
    temporal_component: float

    @property
    def magnitude(self) -> float:
        return math.hypot(self.spatial_component, self.temporal_component)

    def norm(self, p: float = 2.0) -> float:
        """Minkowski p-norm of the two components; ``p=2`` equals :attr:`magnitude`."""
        if p == 2.0:
            return self.magnitude
        if math.isinf(p):
            return max(self.spatial_component, self.temporal_component)
        return (self.spatial_component**p + self.temporal_component**p) ** (1.0 / p)


def variability(r: PlaceReport, anchor: SpaceTimeAnchor, w: SimilarityWeights) -> Variability:
    # report meaning is carried but has no term here; components are unclamped
    if r.crs != anchor.crs:
        raise ValidationError(f"report crs {r.crs} differs from anchor crs {anchor.crs}")
    return Variability(
        spatial_component=point_distance(r.coord, anchor.coord, anchor.crs) / w.spatial_scale,
        temporal_component=temporal_gap(r.time, anchor.time) / w.temporal_scale,
    )


def mean_variability(reports: Sequence[PlaceReport], anchor: SpaceTimeAnchor, w: SimilarityWeights) -> float:
    if not reports:
        raise ValidationError("need at least one report")
    return fmean(variability(r, anchor, w).magnitude for r in reports)


def deviation(
    x: Sequence[PlaceReport],
    y: Sequence[PlaceReport],
    anchor: SpaceTimeAnchor,
    w: SimilarityWeights,
) -> float:
    """Absolute difference of the mean variability magnitudes of two places."""
    return abs(mean_variability(x, anchor, w) - mean_variability(y, anchor, w))


@dataclass(frozen=True)
class PlatialObservables:
    mean_coord: Coord
    coord_dispersion: float
    mean_time_offset: float
    mean_reported_distance: float | None
    mean_speed: float | None
    n_reports: int


def aggregate_reports(rs: Sequence[PlaceReport], anchor: SpaceTimeAnchor) -> PlatialObservables:
    """Summarise sampled reports about one place.

    ``mean_time_offset`` is the signed mean of report start minus anchor
    start, in seconds. ``mean_speed`` averages distance/duration over the
    reports that carry both.
    """
    if not rs:
        raise ValidationError("need at least one report")
    crs = anchor.crs
    mx = fmean(r.coord[0] for r in rs)
    my = fmean(r.coord[1] for r in rs)
    dispersion = math.sqrt(fmean(point_distance(r.coord, (mx, my), crs) ** 2 for r in rs))
    offset = fmean((r.time.start - anchor.time.start) / 1000.0 for r in rs)
    dists = [r.reported_distance for r in rs if r.reported_distance is not None]
    speeds = [
        r.reported_distance / r.reported_duration
        for r in rs
        if r.reported_distance is not None and r.reported_duration is not None
    ]
    return PlatialObservables(
        mean_coord=(mx, my),
        coord_dispersion=dispersion,
        mean_time_offset=offset,
        mean_reported_distance=fmean(dists) if dists else None,
        mean_speed=fmean(speeds) if speeds else None,
        n_reports=len(rs),
    )
