"""Regenerate the bundled case-study fixtures.

Everything is deterministic: running this twice yields byte-identical files.
Coordinates are synthetic local metres; only the counts and dates mirror
the reported case figures.

    python scripts/make_fixtures.py [--out-dir DIR]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from platial.formats import (
    MilestoneFile,
    PlatialRecordFile,
    TimelineFile,
    serialize_milestone_file,
    serialize_record_file,
    serialize_timeline_file,
)
from platial.fixtures import ATTABAD_FACTS, EFERDING_FACTS
from platial.mobility import Milestone, RelocationTrack
from platial.place_model import (
    Geometry,
    Lifecycle,
    MeaningDimension as D,
    MeaningVector,
    Place,
    PlaceTimeline,
    TimeSpec,
    parse_timestamp as ts,
)

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "platial" / "fixtures"


def meaning(*dims: D) -> MeaningVector:
    return MeaningVector(dims)


def square(cx: float, cy: float, side: float) -> Geometry:
    h = side / 2
    return Geometry.box(cx - h, cy - h, cx + h, cy + h)


def timeline(place_id: str, *states: dict, level: int = 0, lifecycle: Lifecycle | None = None) -> PlaceTimeline:
    lc = lifecycle or Lifecycle()
    return PlaceTimeline(
        place_id,
        tuple(Place(id=place_id, level=level, lifecycle=s.pop("lifecycle", lc), **s) for s in states),
    )


# -- taxonomy examples ----------------------------------------------------------


def table1() -> TimelineFile:
    demo_m = meaning(D.categorical("function", "demonstration"), D.text("cause", "climate march"))
    festival_m = meaning(D.categorical("function", "festival"), D.categorical("venue", "city hall"))
    shop_m = meaning(
        D.categorical("function", "shop"),
        D.text("name", "corner bakery"),
        D.numeric("customers_per_day", 120, 0, 1000, weight=0.5, category="economic"),
    )
    tls = [
        timeline(
            "table1/demonstration",
            # area grows 3x: side 100 -> 100*sqrt(2) -> 100*sqrt(3)
            {"time": TimeSpec.interval("2021-03-20T14:00:00Z", "2021-03-20T15:00:00Z"), "space": square(500, 500, 100), "meaning": demo_m},
            {"time": TimeSpec.interval("2021-03-20T15:00:00Z", "2021-03-20T16:00:00Z"), "space": square(500, 500, 141.4213562373095), "meaning": demo_m},
            {"time": TimeSpec.interval("2021-03-20T16:00:00Z", "2021-03-20T17:00:00Z"), "space": square(500, 500, 173.20508075688772), "meaning": demo_m},
            lifecycle=Lifecycle("instantaneous"),
        ),
        timeline(
            "table1/city-festival",
            {"time": TimeSpec.interval("2021-07-01T10:00:00Z", "2021-07-01T18:00:00Z"), "space": Geometry.box(0, 0, 60, 40), "meaning": festival_m},
            {"time": TimeSpec.interval("2021-07-02T10:00:00Z", "2021-07-02T18:00:00Z"), "space": Geometry.box(0, 0, 60, 40), "meaning": festival_m},
            lifecycle=Lifecycle("planned", planned_end=ts("2021-07-02T18:00:00Z")),
        ),
        timeline(
            "table1/police-check-post",
            {
                "time": TimeSpec.interval("2021-05-01T08:00:00Z", "2021-05-01T18:00:00Z"),
                "space": Geometry.point(12_000, 3_000),
                "meaning": meaning(D.categorical("function", "police check post"), D.text("road", "highway A1")),
            },
            lifecycle=Lifecycle("planned", planned_end=ts("2021-05-01T18:00:00Z"), dissolved_at=ts("2021-05-01T18:30:00Z")),
        ),
        timeline(
            "table1/eiffel-tower",
            {"time": TimeSpec.interval("1889-03-31T00:00:00Z", "1999-12-31T23:59:59Z"), "space": square(0, 0, 125), "meaning": meaning(D.categorical("function", "monument"), D.text("name", "Eiffel tower"))},
            {"time": TimeSpec.interval("2000-01-01T00:00:00Z"), "space": square(0, 0, 125), "meaning": meaning(D.categorical("function", "monument"), D.text("name", "Eiffel tower"))},
        ),
        timeline(
            "table1/world-trade-center",
            {
                "time": TimeSpec.interval("1973-04-04T00:00:00Z", "2001-09-11T12:00:00Z"),
                "space": Geometry.box(0, 0, 64, 64),
                "meaning": meaning(D.categorical("function", "office complex"), D.text("name", "World Trade Center")),
                "lifecycle": Lifecycle("planned", dissolved_at=ts("2001-09-11T12:00:00Z")),
            },
        ),
        timeline(
            "table1/kaaba",
            {
                "time": TimeSpec.interval("2000-01-01T00:00:00Z"),
                "space": square(0, 0, 12),
                "meaning": meaning(D.categorical("function", "sacred place"), D.text("name", "Kaaba")),
                "lifecycle": Lifecycle("planned", essence_bound_to_location=True),
            },
        ),
        timeline(
            "table1/shop-move",
            {"time": TimeSpec.interval("2015-01-01T00:00:00Z", "2018-06-30T00:00:00Z"), "space": square(1_000, 1_000, 15), "meaning": shop_m},
            {"time": TimeSpec.interval("2018-07-01T00:00:00Z"), "space": square(3_000, 1_000, 15), "meaning": shop_m},
        ),
        timeline(
            "table1/accident-site",
            {
                "time": TimeSpec.interval("2021-11-02T07:42:00Z", "2021-11-02T10:00:00Z"),
                "space": square(40_000, 2_000, 30),
                "meaning": meaning(D.categorical("function", "accident site"), D.ordinal("severity", "major", ["minor", "major", "fatal"])),
                "lifecycle": Lifecycle("instantaneous", dissolved_at=ts("2021-11-02T10:00:00Z")),
            },
        ),
        timeline(
            "table1/meeting-place",
            {
                "time": TimeSpec.instant("2021-09-15T17:00:00Z"),
                "space": Geometry.point(250, 250),
                "meaning": meaning(D.categorical("function", "meeting place")),
                "lifecycle": Lifecycle("planned"),
            },
        ),
    ]
    comments = {
        "table1/demonstration": "dynamic: crowd extent grows threefold over the afternoon",
        "table1/city-festival": "static: festival in the city hall keeps its boundary",
        "table1/police-check-post": "temporary: predefined lifespan, removed after its planned end",
        "table1/eiffel-tower": "permanent, active",
        "table1/world-trade-center": "permanent place that disappeared through intervention",
        "table1/kaaba": "immovable: meaning bound to the location",
        "table1/shop-move": "movable: business relocated 2 km keeping its identity",
        "table1/accident-site": "instantaneous: comes into being with the event",
        "table1/meeting-place": "planned",
    }
    return TimelineFile("planar-m", tuple(tls), comments=comments, metadata={"case": "table1"})


def table3() -> TimelineFile:
    monument = meaning(D.categorical("function", "monument"), D.text("interpretation", "war memorial"))
    shop = meaning(D.categorical("function", "shop"), D.text("name", "hardware store"))
    landmark = meaning(D.categorical("function", "landmark"), D.text("name", "old town hall"))
    mosque = meaning(D.categorical("function", "mosque"), D.categorical("community", "village community"))
    day = TimeSpec.interval("2020-05-04T08:00:00Z", "2020-05-04T20:00:00Z")
    tls = [
        timeline("table3/monument", {"time": day, "space": square(0, 0, 20), "meaning": monument}),
        timeline(
            "table3/shop-annex",
            {"time": day, "space": Geometry.box(0, 0, 10, 10), "meaning": shop},
            {"time": day, "space": Geometry.box(0, 0, 20, 10), "meaning": shop},
        ),
        timeline(
            "table3/permanent-landmark",
            {"time": TimeSpec.interval("1950-01-01T00:00:00Z", "1999-12-31T00:00:00Z"), "space": square(0, 0, 40), "meaning": landmark},
            {"time": TimeSpec.interval("2000-01-01T00:00:00Z"), "space": square(0, 0, 40), "meaning": landmark},
        ),
        timeline(
            "table3/community-mosque",
            {"time": TimeSpec.interval("1990-01-01T00:00:00Z", "2010-01-04T00:00:00Z"), "space": square(0, 0, 25), "meaning": mosque},
            {"time": TimeSpec.interval("2010-06-01T00:00:00Z"), "space": square(3_000, 1_500, 25), "meaning": mosque},
            lifecycle=Lifecycle("planned"),
        ),
    ]
    comments = {
        "table3/monument": 'FT/FS - Place is driven by meaning only ("1-D")',
        "table3/shop-annex": 'FT/CS - Driven by meaning, and changing spaces ("2-D")',
        "table3/permanent-landmark": 'CT/FS - Driven by changing time and meaning ("2-D")',
        "table3/community-mosque": 'CT/CS - Driven by change in meaning, time and space ("3-D")',
    }
    return TimelineFile("planar-m", tuple(tls), comments=comments, metadata={"case": "table3"})


def fig1_scales() -> PlatialRecordFile:
    t = TimeSpec.interval("2020-01-01T00:00:00Z")
    scale = ("individual", "community", "city")

    def m(name: str, sc: str) -> MeaningVector:
        return meaning(D.text("name", name), D.ordinal("scale", sc, scale))

    recs = [
        Place("fig1/city", 0, t, m("Graz", "city"), Geometry.box(0, 0, 10_000, 8_000)),
        Place("fig1/community-market", 1, t, m("farmers market", "community"), Geometry.box(1_000, 1_000, 1_400, 1_300), parent="fig1/city"),
        Place("fig1/community-parish", 1, t, m("parish", "community"), Geometry.box(5_000, 2_000, 6_500, 3_000), parent="fig1/city"),
        Place("fig1/individual-bench", 2, t, m("favourite bench", "individual"), Geometry.point(1_100, 1_100), parent="fig1/community-market"),
        Place("fig1/individual-stall", 2, t, m("aunt's stall", "individual"), Geometry.box(1_200, 1_200, 1_210, 1_205), parent="fig1/community-market"),
        Place("fig1/individual-choir", 2, t, m("choir loft", "individual"), Geometry.point(5_500, 2_500), parent="fig1/community-parish"),
    ]
    return PlatialRecordFile("planar-m", tuple(recs), metadata={"case": "fig1"})


# -- Attabad ---------------------------------------------------------------------

ATTABAD_LANDSLIDE = "2010-01-04T00:00:00Z"
VILLAGE_ORIGINS = [(2_000 + 3_000 * k, 2_000) for k in range(5)]
SHELTERS = [(4_000, 12_000), (9_000, 12_500), (14_000, 12_000)]


def _household_centre(v: int, k: int) -> tuple[float, float]:
    ox, oy = VILLAGE_ORIGINS[v]
    return ox + 100 + 50 * (k % 8), oy + 100 + 50 * (k // 8)


def attabad_records() -> PlatialRecordFile:
    t = TimeSpec.interval("2009-01-01T00:00:00Z", ATTABAD_LANDSLIDE)
    recs = [
        Place(
            "attabad/gojal",
            0,
            TimeSpec.interval("2009-01-01T00:00:00Z"),
            meaning(D.categorical("function", "valley region"), D.text("name", "Gojal")),
            Geometry.box(0, 0, 18_000, 15_000),
        )
    ]
    per_village = ATTABAD_FACTS["submerged_households"] // ATTABAD_FACTS["villages"]
    for v in range(ATTABAD_FACTS["villages"]):
        ox, oy = VILLAGE_ORIGINS[v]
        vid = f"attabad/village-{v + 1}"
        name = "Attabad" if v == 0 else f"village {v + 1}"
        recs.append(
            Place(vid, 1, t, meaning(D.categorical("function", "village"), D.text("name", name)),
                  Geometry.box(ox, oy, ox + 600, oy + 500), parent="attabad/gojal")
        )
        for k in range(per_village):
            cx, cy = _household_centre(v, k)
            recs.append(
                Place(
                    f"attabad/hh-{v + 1}-{k + 1:02d}",
                    2,
                    t,
                    meaning(D.categorical("function", "dwelling"), D.categorical("status", "submerged")),
                    square(cx, cy, 20),
                    lifecycle=Lifecycle("planned", dissolved_at=ts(ATTABAD_LANDSLIDE)),
                    parent=vid,
                )
            )
    md = {"case": "attabad", **ATTABAD_FACTS, "landslide": ATTABAD_LANDSLIDE}
    return PlatialRecordFile("planar-m", tuple(recs), metadata=md)


def attabad_timelines() -> TimelineFile:
    per_village = ATTABAD_FACTS["submerged_households"] // ATTABAD_FACTS["villages"]
    households = [(v, k) for v in range(ATTABAD_FACTS["villages"]) for k in range(per_village)]
    n_fam = ATTABAD_FACTS["displaced_families"]
    # the first (380 - 240) households hosted two families, the rest one
    owners = households + households[: n_fam - len(households)]
    tls, kinds = [], {}
    for i, (v, k) in enumerate(owners):
        fid = f"attabad/family-{i + 1:03d}"
        hid = f"attabad/hh-{v + 1}-{k + 1:02d}"
        m = meaning(
            D.categorical("role", "family home"),
            D.categorical("village", f"village-{v + 1}"),
            D.text("household", hid),
        )
        sx, sy = SHELTERS[i % len(SHELTERS)]
        tls.append(
            PlaceTimeline(
                fid,
                (
                    Place(fid, 3, TimeSpec.interval("2009-01-01T00:00:00Z", ATTABAD_LANDSLIDE), m,
                          Geometry.point(*_household_centre(v, k)), parent=hid),
                    Place(fid, 3, TimeSpec.interval("2010-06-01T00:00:00Z"), m,
                          Geometry.point(sx + 10 * (i % 20), sy + 10 * (i // 20)), parent=hid),
                ),
            )
        )
        kinds[fid] = "corporeal"
    md = {"case": "attabad", **ATTABAD_FACTS, "landslide": ATTABAD_LANDSLIDE}
    return TimelineFile("planar-m", tuple(tls), mobility_kinds=kinds, metadata=md)


# -- Eferding --------------------------------------------------------------------


def _eferding_metadata() -> dict:
    return {
        "case": "eferding",
        **EFERDING_FACTS,
        "zone_area_note": "reported as '24.35 km'; stored as km^2",
        "flood_zone": "HQ30",
        "flood_event": "2013-06-04",
    }


def _risk(h: float, e: float, v: float) -> tuple[D, D, D]:
    return (
        D.numeric("hazard", h, 0, 1, category="risk"),
        D.numeric("exposure", e, 0, 1, category="risk"),
        D.numeric("vulnerability", v, 0, 1, category="risk"),
    )


def eferding_records() -> PlatialRecordFile:
    t = TimeSpec.interval("2013-12-31T00:00:00Z")
    belonging = ("low", "medium", "high")
    # 4870 m x 5000 m = 24.35 km^2
    zone = Geometry.box(5_000, 5_000, 9_870, 10_000)
    recs = [
        Place("eferding/basin", 0, TimeSpec.interval("2002-01-01T00:00:00Z"),
              meaning(D.categorical("function", "retention basin"), *_risk(0.6, 0.6, 0.4)),
              Geometry.box(0, 0, 20_000, 15_000)),
        Place("eferding/relocation-zone", 1, t,
              meaning(D.categorical("function", "relocation zone"), *_risk(0.8, 0.7, 0.5)),
              zone, parent="eferding/basin"),
    ]
    for i in range(EFERDING_FACTS["eligible_households"]):
        cx, cy = 5_200 + 300 * (i % 15), 5_200 + 450 * (i // 15)
        h = 0.70 + 0.05 * (i % 5)
        e = 0.40 + 0.05 * (i % 9)
        v = 0.20 + 0.05 * (i % 13)
        recs.append(
            Place(
                f"eferding/hh-{i + 1:03d}",
                2,
                t,
                meaning(
                    D.categorical("function", "dwelling"),
                    *_risk(round(h, 2), round(e, 2), round(v, 2)),
                    D.numeric("compensation_share", 0.8, 0, 1, category="economic"),
                    D.ordinal("place_belonging", belonging[i % 3], belonging, category="emotional"),
                ),
                square(cx, cy, 25),
                parent="eferding/relocation-zone",
            )
        )
    return PlatialRecordFile("planar-m", tuple(recs), metadata=_eferding_metadata())


def _day(year: int, month: int, day: int) -> int:
    return ts(f"{year:04d}-{month:02d}-{day:02d}T12:00:00Z")


def eferding_milestones() -> MilestoneFile:
    n = EFERDING_FACTS["eligible_households"]
    tracks = []
    for i in range(n):
        ms = [Milestone("disaster_occurrence", ts("2013-06-04T00:00:00Z")), Milestone("zone_designation", ts("2013-12-31T00:00:00Z"))]
        if i < 72:
            # 72 contracts by the end of 2019, spread over 2014-2019
            signed = _day(2014 + i // 12, 1 + i % 12, 10)
            ms.append(Milestone("contract_signed", signed))
            if i < 57:
                ms.append(Milestone("removal_complete", _day(2014 + i // 12, 1 + i % 12, 28) + 86_400_000 * 180))
            elif i < 67:
                ms.append(Milestone("removal_complete", _day(2020, 1 + (i - 57), 15)))
        elif i < 80:
            # later signers, after the reporting date
            ms.append(Milestone("contract_signed", _day(2020, 1 + (i - 72), 5)))
        tracks.append(RelocationTrack(f"eferding/hh-{i + 1:03d}", tuple(ms), "relocation"))
    return MilestoneFile(tuple(tracks), metadata=_eferding_metadata())


BUILDERS = {
    "table1.json": lambda: serialize_timeline_file(table1()),
    "table3-canon.json": lambda: serialize_timeline_file(table3()),
    "fig1-scales.json": lambda: serialize_record_file(fig1_scales()),
    "attabad.json": lambda: serialize_record_file(attabad_records()),
    "attabad-timelines.json": lambda: serialize_timeline_file(attabad_timelines()),
    "eferding.json": lambda: serialize_record_file(eferding_records()),
    "eferding-milestones.json": lambda: serialize_milestone_file(eferding_milestones()),
}


def build_all() -> dict[str, str]:
    return {name: build() for name, build in BUILDERS.items()}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in build_all().items():
        (args.out_dir / name).write_text(text, encoding="utf-8")
        print(f"wrote {args.out_dir / name}")


if __name__ == "__main__":
    main()
