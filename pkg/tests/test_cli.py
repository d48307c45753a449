import json
import shutil
import subprocess
import sys

import pytest

from platial.cli import main
from platial.fixtures import fixture_path


@pytest.fixture(autouse=True)
def fixed_time(monkeypatch):
    monkeypatch.setenv("PLATIAL_REPORT_TIME", "2000-01-01T00:00:00Z")


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def report(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    return json.loads(out)


class TestValidate:
    def test_eferding_ok(self, capsys):
        code, out, _ = run(["validate", "fixtures/eferding.json"], capsys)
        assert code == 0 and out.startswith("OK")

    def test_all_fixture_kinds(self, capsys):
        names = ["fixtures/attabad.json", "fixtures/table1.json", "fixtures/eferding-milestones.json"]
        assert run(["validate", *names], capsys)[0] == 0

    def test_invalid(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"format_version": "1", "crs": "planar-m", "records": [{"id": "x"}]}))
        code, out, _ = run(["validate", str(bad)], capsys)
        assert code == 1 and "record 0" in out

    def test_missing_file(self, tmp_path, capsys):
        assert run(["validate", str(tmp_path / "nope.json")], capsys)[0] == 2

    def test_level_warning(self, tmp_path, capsys):
        recs = json.loads(fixture_path("fig1-scales").read_text())
        recs["records"][1]["level"] = 0
        f = tmp_path / "f.json"
        f.write_text(json.dumps(recs))
        code, out, _ = run(["validate", str(f)], capsys)
        assert code == 0 and "WARNING" in out


class TestCommands:
    def test_relocation(self, capsys):
        s = report(["relocation", "fixtures/eferding-milestones.json", "--as-of", "2019-12-31"], capsys)["summary"]
        assert (s["eligible"], s["signed"], s["moved"]) == (146, 72, 57)

    def test_relocation_without_date_counts_everything(self, capsys):
        s = report(["relocation", "fixtures/eferding-milestones.json"], capsys)["summary"]
        assert s["as_of"] is None and s["signed"] > 72

    def test_classify_table3(self, capsys):
        r = report(["classify", "fixtures/table3-canon.json"], capsys)
        got = {x["place_id"]: x["construction"] for x in r["results"]}
        assert got == {
            "table3/community-mosque": "CT_CS",
            "table3/monument": "FT_FS",
            "table3/permanent-landmark": "CT_FS",
            "table3/shop-annex": "FT_CS",
        }

    def test_mobility(self, capsys):
        r = report(["mobility", "fixtures/attabad-timelines.json"], capsys)
        assert r["summary"]["n_events"] == 380
        assert {e["kind"] for x in r["results"] for e in x["events"]} == {"corporeal"}

    def test_risk(self, capsys):
        r = report(["risk", "fixtures/eferding.json", "--combiner", "geometric:0.4,0.3,0.3"], capsys)
        assert r["summary"]["n_places"] == 148
        assert r["config"]["combiner"] == "geometric:0.4,0.3,0.3"

    def test_similarity_csv(self, tmp_path, capsys):
        out = tmp_path / "sim.json"
        assert run(["similarity", "fixtures/fig1-scales.json", "--out", str(out)], capsys)[0] == 0
        csv = (tmp_path / "sim.csv").read_bytes()
        assert b"\r" not in csv
        rows = csv.decode().splitlines()
        assert rows[0].startswith("id,fig1/city,")
        assert len(rows) == 7
        assert json.loads(out.read_text())["summary"]["n_places"] == 6


class TestConfigEcho:
    def test_classification_flags(self, capsys):
        c = report(["classify", "fixtures/table1.json", "--geom-tol", "0.1", "--min-displacement", "75", "--essence-threshold", "0.5"], capsys)["config"]
        assert (c["geom_tolerance"], c["min_displacement"], c["essence_threshold"]) == (0.1, 75.0, 0.5)
        assert c["input"] == "table1.json"

    def test_similarity_flags(self, capsys):
        c = report(["similarity", "fixtures/fig1-scales.json", "--weights", "2,1,1", "--spatial-scale", "500", "--temporal-scale", "60"], capsys)["config"]
        assert (c["w_spatial"], c["w_temporal"], c["w_semantic"], c["spatial_scale"], c["temporal_scale"]) == (2, 1, 1, 500, 60)

    def test_as_of(self, capsys):
        c = report(["relocation", "fixtures/eferding-milestones.json", "--as-of", "2019-12-31"], capsys)["config"]
        assert c["as_of"] == "2019-12-31T23:59:59.999Z"


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["frobnicate"],
            ["classify"],
            ["similarity", "fixtures/fig1-scales.json", "--weights", "1,2"],
            ["similarity", "fixtures/fig1-scales.json", "--weights", "0,0,0"],
            ["classify", "fixtures/table1.json", "--geom-tol", "2"],
            ["risk", "fixtures/eferding.json", "--combiner", "max"],
            ["relocation", "fixtures/eferding-milestones.json", "--as-of", "yesterday"],
        ],
    )
    def test_usage(self, argv, capsys):
        assert run(argv, capsys)[0] == 64

    def test_io(self, tmp_path, capsys):
        assert run(["classify", str(tmp_path / "missing.json")], capsys)[0] == 2

    def test_wrong_input_kind_is_invalid(self, capsys):
        code, _, err = run(["risk", "fixtures/table1.json"], capsys)
        assert code == 1 and err

    def test_missing_risk_key(self, capsys):
        code, _, err = run(["risk", "fixtures/fig1-scales.json"], capsys)
        assert code == 1 and "fig1/city" in err


def test_fixture_dir_override(tmp_path, monkeypatch, capsys):
    shutil.copy(fixture_path("eferding-milestones"), tmp_path / "eferding-milestones.json")
    d = json.loads((tmp_path / "eferding-milestones.json").read_text())
    d["tracks"] = d["tracks"][:10]
    (tmp_path / "eferding-milestones.json").write_text(json.dumps(d))
    monkeypatch.setenv("PLATIAL_FIXTURES", str(tmp_path))
    s = report(["relocation", "fixtures/eferding-milestones.json"], capsys)["summary"]
    assert s["eligible"] == 10


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "platial", "validate", "fixtures/table3-canon.json"], capture_output=True, text=True)
    assert p.returncode == 0, p.stderr
