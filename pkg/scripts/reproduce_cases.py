"""Print the Eferding and Attabad case figures computed from the bundled fixtures."""

from platial.classification import ClassificationConfig
from platial.fixtures import fixture_path
from platial.formats import parse_milestone_file, parse_record_file, parse_timeline_file
from platial.hierarchy import build_hierarchy
from platial.mobility import displacement_summary, place_risk_overlay, relocation_summary
from platial.place_model import parse_timestamp


def main() -> None:
    tracks = parse_milestone_file(fixture_path("eferding-milestones").read_bytes())
    records = parse_record_file(fixture_path("eferding").read_bytes())
    s = relocation_summary(tracks.tracks, parse_timestamp("2019-12-31T23:59:59.999Z"))
    m = records.metadata
    print("Eferding")
    print(f"  zone area (km2)      {m['zone_area_km2']}")
    print(f"  buildings / housing  {m['buildings']} / {m['housing_buildings']}")
    print(f"  eligible households  {s.eligible}")
    print(f"  signed by 2019-12-31 {s.signed}")
    print(f"  moved by 2019-12-31  {s.moved}")
    zone = [p for p in records.records if p.id == "eferding/relocation-zone"]
    print(f"  zone risk (product)  {place_risk_overlay(zone)[0][1]:.2f}")

    places = parse_record_file(fixture_path("attabad").read_bytes())
    timelines = parse_timeline_file(fixture_path("attabad-timelines").read_bytes())
    h = build_hierarchy(places.records)
    d = displacement_summary(timelines.timelines, ClassificationConfig())
    print("Attabad")
    print(f"  villages             {sum(p.level == 1 for p in h.nodes.values())}")
    print(f"  households           {sum(p.level == 2 for p in h.nodes.values())}")
    print(f"  family moves         {d.n_events}")
    print(f"  mean move (m)        {d.mean_displacement:.0f}")


if __name__ == "__main__":
    main()
