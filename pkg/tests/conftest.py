import math
import re
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from platial.formats import parse_milestone_file, parse_record_file, parse_timeline_file
from platial.fixtures import fixture_path
from platial.place_model import Geometry, MeaningDimension, MeaningVector, Place, TimeSpec

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion with a printable label")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and rep.when == "call":
        _ACCEPTANCE.append((marker.args[0], "PASS" if rep.passed else "FAIL", item.name))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, name in sorted(_ACCEPTANCE, key=lambda r: int(re.match(r"AC(\d+)", r[0]).group(1))):
        terminalreporter.write_line(f"{status}  {label}  ({name})")


# -- fixture loading -------------------------------------------------------------


@pytest.fixture(scope="session")
def table1():
    tf = parse_timeline_file(fixture_path("table1").read_bytes())
    return {t.place_id.split("/", 1)[1]: t for t in tf.timelines}


@pytest.fixture(scope="session")
def table3():
    return parse_timeline_file(fixture_path("table3-canon").read_bytes())


@pytest.fixture(scope="session")
def attabad_records():
    return parse_record_file(fixture_path("attabad").read_bytes())


@pytest.fixture(scope="session")
def attabad_timelines():
    return parse_timeline_file(fixture_path("attabad-timelines").read_bytes())


@pytest.fixture(scope="session")
def eferding_records():
    return parse_record_file(fixture_path("eferding").read_bytes())


@pytest.fixture(scope="session")
def eferding_tracks():
    return parse_milestone_file(fixture_path("eferding-milestones").read_bytes())


@pytest.fixture(scope="session")
def fig1():
    return parse_record_file(fixture_path("fig1-scales").read_bytes())


# -- hypothesis strategies -------------------------------------------------------

coords = st.floats(-1e4, 1e4, allow_nan=False, allow_infinity=False)


@st.composite
def star_polygons(draw, max_vertices: int = 12):
    """Simple polygons: vertices at increasing angles around a centre."""
    n = draw(st.integers(3, max_vertices))
    cx, cy = draw(coords), draw(coords)
    # one vertex per sector keeps every angular gap below pi
    jitter = draw(st.lists(st.floats(0, 0.4), min_size=n, max_size=n))
    angles = [2 * math.pi * (k + j) / n for k, j in enumerate(jitter)]
    radii = draw(st.lists(st.floats(1.0, 500.0), min_size=n, max_size=n))
    ring = [(cx + r * math.cos(a), cy + r * math.sin(a)) for a, r in zip(angles, radii)]
    return Geometry.polygon(ring)


@st.composite
def boxes(draw):
    x, y = draw(coords), draw(coords)
    w, h = draw(st.floats(1.0, 1000.0)), draw(st.floats(1.0, 1000.0))
    return Geometry.box(x, y, x + w, y + h)


timestamps = st.integers(0, 2 * 10**12)


@st.composite
def time_specs(draw):
    start = draw(timestamps)
    kind = draw(st.sampled_from(["instant", "closed", "open"]))
    if kind == "instant":
        return TimeSpec.instant(start)
    if kind == "open":
        return TimeSpec.interval(start)
    return TimeSpec.interval(start, start + draw(st.integers(0, 10**9)))


@st.composite
def meaning_vectors(draw, keys=("a", "b", "c", "d", "e")):
    chosen = draw(st.lists(st.sampled_from(keys), min_size=1, max_size=len(keys), unique=True))
    dims = []
    for k in chosen:
        w = draw(st.floats(0.01, 10.0))
        if k in ("a", "b"):
            dims.append(MeaningDimension.numeric(k, draw(st.floats(0, 10)), 0, 10, weight=w))
        elif k == "c":
            dims.append(MeaningDimension.ordinal(k, draw(st.sampled_from("lmh")), "lmh", weight=w))
        elif k == "d":
            dims.append(MeaningDimension.categorical(k, draw(st.sampled_from(["shop", "mosque", "school"])), weight=w))
        else:
            dims.append(MeaningDimension.text(k, draw(st.sampled_from(["x", "y"])), weight=w))
    return MeaningVector(tuple(dims))


@st.composite
def places(draw, geometry=None):
    g = draw(geometry if geometry is not None else st.one_of(boxes(), coords.flatmap(lambda x: coords.map(lambda y: Geometry.point(x, y)))))
    return Place("p", 0, draw(time_specs()), draw(meaning_vectors()), g)
