import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import boxes, coords, star_polygons, time_specs
from platial.errors import CRSMismatchError, ValidationError
from platial.place_model import (
    Geometry,
    Lifecycle,
    MeaningDimension,
    MeaningVector,
    Place,
    PlaceTimeline,
    TimeSpec,
    area,
    centroid,
    format_timestamp,
    geometry_change,
    parse_timestamp,
    point_distance,
    temporal_gap,
)

UNIT = Geometry.box(0, 0, 1, 1)
HOUR = 3_600_000


def t(hhmm: str) -> int:
    return parse_timestamp(f"2021-01-01T{hhmm}:00Z")


class TestTime:
    def test_roundtrip_rfc3339(self):
        ms = parse_timestamp("2019-12-31T23:59:59.250Z")
        assert format_timestamp(ms) == "2019-12-31T23:59:59.250Z"
        assert parse_timestamp("2019-12-31T23:59:59.250+00:00") == ms

    def test_offset_converted_to_utc(self):
        assert parse_timestamp("2021-01-01T01:00:00+01:00") == parse_timestamp("2021-01-01T00:00:00Z")

    def test_naive_timestamp_rejected(self):
        with pytest.raises(ValidationError):
            parse_timestamp("2021-01-01T00:00:00")

    def test_interval_bounds(self):
        with pytest.raises(ValidationError):
            TimeSpec.interval(t("11:00"), t("10:00"))
        with pytest.raises(ValidationError):
            TimeSpec("instant", 0, 5)

    def test_gap_examples(self):
        assert temporal_gap(TimeSpec.interval(t("10:00"), t("11:00")), TimeSpec.interval(t("10:30"), t("12:00"))) == 0
        assert temporal_gap(TimeSpec.instant(t("10:00")), TimeSpec.instant(t("10:00"))) == 0
        # 12:00 - 11:00
        assert temporal_gap(TimeSpec.interval(t("10:00"), t("11:00")), TimeSpec.interval(t("12:00"), t("13:00"))) == 3600

    def test_touching_intervals(self):
        assert temporal_gap(TimeSpec.interval(t("10:00"), t("11:00")), TimeSpec.interval(t("11:00"), t("12:00"))) == 0

    def test_open_interval_extends_forever(self):
        assert temporal_gap(TimeSpec.interval(t("10:00")), TimeSpec.instant(t("23:00"))) == 0
        assert temporal_gap(TimeSpec.instant(t("09:00")), TimeSpec.interval(t("10:00"))) == 3600

    @given(time_specs(), time_specs())
    def test_gap_symmetric_and_zero_iff_intersecting(self, a, b):
        g = temporal_gap(a, b)
        assert g == temporal_gap(b, a)
        assert g >= 0
        intersects = max(a.start, b.start) <= min(a.upper, b.upper)
        assert (g == 0) == intersects


class TestGeometry:
    def test_polygon_must_close(self):
        with pytest.raises(ValidationError, match="closed"):
            Geometry("polygon", ((0, 0), (1, 0), (1, 1), (0, 1)))

    def test_too_few_vertices(self):
        with pytest.raises(ValidationError):
            Geometry("polygon", ((0, 0), (1, 0), (0, 0)))

    def test_self_intersecting_rejected(self):
        # asymmetric bowtie: non-zero signed area, crossing edges
        with pytest.raises(ValidationError, match="self-intersecting"):
            Geometry.polygon([(0, 0), (3, 2), (3, 0), (0, 1)])

    def test_orientation_normalized_ccw(self):
        cw = Geometry.polygon([(0, 0), (0, 1), (1, 1), (1, 0)])
        x = [c[0] for c in cw.coords]
        y = [c[1] for c in cw.coords]
        signed = sum(x[i] * y[i + 1] - x[i + 1] * y[i] for i in range(len(x) - 1))
        assert signed > 0
        assert cw.coords[0] == cw.coords[-1]

    def test_multi_requires_parts_and_shared_crs(self):
        with pytest.raises(ValidationError):
            Geometry("multi", parts=())
        with pytest.raises(ValidationError):
            Geometry("multi", parts=(Geometry.point(0, 0), Geometry.point(1, 1, crs="wgs84-deg")))

    def test_unknown_crs(self):
        with pytest.raises(ValidationError):
            Geometry.point(0, 0, crs="epsg:3857")

    def test_non_finite_coordinate(self):
        with pytest.raises(ValidationError):
            Geometry.point(math.nan, 0)


class TestCentroid:
    def test_point_identity(self):
        assert centroid(Geometry.point(3, 4)) == (3, 4)

    def test_unit_square(self):
        assert centroid(UNIT) == pytest.approx((0.5, 0.5), abs=1e-15)

    def test_triangle_matches_vertex_mean(self):
        # a triangle's area centroid equals the mean of its three vertices
        c = centroid(Geometry.polygon([(0, 0), (6, 0), (0, 6)]))
        assert c == pytest.approx(((0 + 6 + 0) / 3, (0 + 0 + 6) / 3), abs=1e-12)
        assert not c.degenerate

    def test_degenerate_polygon_flagged(self):
        c = centroid(Geometry.polygon([(0, 0), (1, 0), (2, 0), (0, 0)][:-1]))
        assert c.degenerate
        assert c == pytest.approx((1.0, 0.0))

    def test_l_shape_by_decomposition(self):
        # L = 2x1 bar at bottom + 1x1 square on top-left: (1, .5)*2 and (.5, 1.5)*1
        ell = Geometry.polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
        assert centroid(ell) == pytest.approx(((2 * 1 + 0.5) / 3, (2 * 0.5 + 1.5) / 3), abs=1e-12)

    def test_multi_area_weighted(self):
        g = Geometry.multi([Geometry.box(0, 0, 1, 1), Geometry.box(10, 0, 12, 1), Geometry.point(100, 100)])
        # weights 1 and 2; the point carries none
        assert centroid(g) == pytest.approx(((0.5 + 2 * 11) / 3, 0.5), abs=1e-12)

    def test_multi_points_arithmetic_mean(self):
        g = Geometry.multi([Geometry.point(0, 0), Geometry.point(2, 0), Geometry.point(4, 6)])
        assert centroid(g) == pytest.approx((2, 2))

    @settings(max_examples=200)
    @given(star_polygons(), coords, coords)
    def test_translation_equivariance(self, g, dx, dy):
        c0 = centroid(g)
        c1 = centroid(g.translate(dx, dy))
        assert abs(c1[0] - (c0[0] + dx)) <= 1e-9
        assert abs(c1[1] - (c0[1] + dy)) <= 1e-9


class TestGeometryChange:
    def test_identical(self):
        assert geometry_change(UNIT, UNIT) == 0

    def test_translated_aligned(self):
        assert geometry_change(UNIT, UNIT.translate(100, 0), align_centroids=True) == 0

    def test_translated_unaligned_is_total(self):
        assert geometry_change(UNIT, UNIT.translate(100, 0)) == 1

    def test_square_vs_rectangle(self):
        # sym-diff area 1, union area 2
        assert geometry_change(UNIT, Geometry.box(0, 0, 1, 2)) == pytest.approx(0.5, abs=1e-12)

    def test_crs_errors(self):
        with pytest.raises(CRSMismatchError):
            geometry_change(Geometry.point(0, 0), Geometry.point(0, 0, crs="wgs84-deg"))
        wgs = Geometry.box(10, 10, 11, 11, crs="wgs84-deg")
        with pytest.raises(CRSMismatchError, match="project first"):
            geometry_change(wgs, wgs)

    def test_points(self):
        assert geometry_change(Geometry.point(1, 1), Geometry.point(1, 1)) == 0
        assert geometry_change(Geometry.point(1, 1), Geometry.point(2, 1)) == 1
        assert geometry_change(Geometry.point(1, 1), Geometry.point(2, 1), align_centroids=True) == 0
        assert geometry_change(Geometry.point(0.5, 0.5), UNIT) == 1

    @settings(max_examples=100)
    @given(boxes(), boxes(), st.booleans())
    def test_symmetric_bounded(self, a, b, align):
        x, y = geometry_change(a, b, align), geometry_change(b, a, align)
        assert 0 <= x <= 1
        assert x == pytest.approx(y, abs=1e-9)
        assert geometry_change(a, a, align) == 0


class TestMeasures:
    def test_area(self):
        assert area(Geometry.polygon([(0, 0), (6, 0), (0, 6)])) == 18
        assert area(Geometry.point(1, 2)) == 0
        # overlapping parts counted once
        assert area(Geometry.multi([UNIT, Geometry.box(0.5, 0, 1.5, 1)])) == pytest.approx(1.5)

    def test_haversine_one_degree_latitude(self):
        # 2*pi*R/360
        assert point_distance((0, 0), (0, 1), "wgs84-deg") == pytest.approx(2 * math.pi * 6_371_008.8 / 360, rel=1e-12)


class TestMeaningAndPlace:
    def test_numeric_value_in_range(self):
        with pytest.raises(ValidationError):
            MeaningDimension.numeric("x", 11, 0, 10)
        with pytest.raises(ValidationError):
            MeaningDimension("x", "numeric", 1.0)

    def test_ordinal_membership(self):
        with pytest.raises(ValidationError):
            MeaningDimension.ordinal("s", "huge", ["low", "high"])

    def test_weights(self):
        with pytest.raises(ValidationError):
            MeaningDimension.categorical("c", "a", weight=-1)
        with pytest.raises(ValidationError, match="weight > 0"):
            MeaningVector.of(MeaningDimension.categorical("c", "a", weight=0))

    def test_unique_keys(self):
        d = MeaningDimension.categorical("c", "a")
        with pytest.raises(ValidationError, match="duplicate"):
            MeaningVector.of(d, d)

    def test_category(self):
        with pytest.raises(ValidationError):
            MeaningDimension.categorical("c", "a", category="social")

    def test_place_invariants(self):
        m = MeaningVector.of(MeaningDimension.categorical("c", "a"))
        with pytest.raises(ValidationError):
            Place("", 0, TimeSpec.instant(0), m)
        with pytest.raises(ValidationError):
            Place("p", -1, TimeSpec.instant(0), m)
        with pytest.raises(ValidationError, match="dissolved_at"):
            Place("p", 0, TimeSpec.instant(1000), m, lifecycle=Lifecycle(dissolved_at=0))

    def test_timeline_invariants(self):
        m = MeaningVector.of(MeaningDimension.categorical("c", "a"))
        a = Place("p", 0, TimeSpec.instant(2000), m)
        b = Place("p", 0, TimeSpec.instant(1000), m)
        with pytest.raises(ValidationError):
            PlaceTimeline("p", ())
        with pytest.raises(ValidationError):
            PlaceTimeline("p", (a, b))
        with pytest.raises(ValidationError):
            PlaceTimeline("q", (a,))
        assert PlaceTimeline.from_states([a, b]).states == (b, a)
