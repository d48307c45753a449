"""Batch command line interface.

Exit codes: 0 success, 1 validation failure, 2 I/O failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

from platial.classification import ClassificationConfig, classify
from platial.errors import PlatialError
from platial.fixtures import fixture_dir
from platial.formats import (
    MilestoneFile,
    PlatialRecordFile,
    dump_report,
    load_timelines,
    make_report,
    parse_any,
    parse_milestone_file,
    parse_record_file,
    write_csv_matrix,
)
from platial.hierarchy import build_hierarchy
from platial.mobility import (
    combiner_name,
    detect_mobility_events,
    displacement_summary,
    parse_combiner,
    place_risk_overlay,
    relocation_summary,
)
from platial.place_model import format_timestamp, parse_timestamp
from platial.similarity import SimilarityWeights, similarity_matrix

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _weights(text: str) -> tuple[float, float, float]:
    try:
        ws = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    if len(ws) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return ws


def _as_of(text: str) -> int:
    """A date means the end of that UTC day; a full timestamp is taken as given."""
    try:
        if re.fullmatch(r"\d{4}-\d{2}-\d{2}", text):
            return parse_timestamp(text + "T00:00:00Z") + 86_400_000 - 1
        return parse_timestamp(text)
    except PlatialError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="platial", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_out(sp):
        sp.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")

    def add_classification(sp):
        d = ClassificationConfig()
        sp.add_argument("--geom-tol", type=float, default=d.geom_tolerance)
        sp.add_argument("--min-displacement", type=float, default=d.min_displacement, help="metres")
        sp.add_argument("--essence-threshold", type=float, default=d.essence_threshold)

    v = sub.add_parser("validate", help="validate record, timeline or milestone files")
    v.add_argument("files", nargs="+")

    c = sub.add_parser("classify", help="classify place timelines")
    c.add_argument("file")
    add_classification(c)
    add_out(c)

    s = sub.add_parser("similarity", help="pairwise similarity of places")
    s.add_argument("file")
    s.add_argument("--weights", type=_weights, default=(1.0, 1.0, 1.0), help="ws,wt,wm")
    s.add_argument("--spatial-scale", type=float, default=SimilarityWeights().spatial_scale, help="metres")
    s.add_argument("--temporal-scale", type=float, default=SimilarityWeights().temporal_scale, help="seconds")
    s.add_argument("--csv", type=Path, help="matrix CSV path (default: next to --out)")
    add_out(s)

    m = sub.add_parser("mobility", help="detect platial-mobility events")
    m.add_argument("file")
    add_classification(m)
    add_out(m)

    r = sub.add_parser("relocation", help="relocation milestone counts")
    r.add_argument("file")
    r.add_argument("--as-of", type=_as_of, default=None, help="date or RFC 3339 timestamp")
    add_out(r)

    k = sub.add_parser("risk", help="hazard/exposure/vulnerability scores per place")
    k.add_argument("file")
    k.add_argument("--combiner", default="product", help="product | geometric:wh,we,wv")
    k.add_argument("--hazard-key", default="hazard")
    k.add_argument("--exposure-key", default="exposure")
    k.add_argument("--vulnerability-key", default="vulnerability")
    add_out(k)
    return p


def resolve_input(name: str) -> Path:
    """``fixtures/<file>`` falls back to the fixture directory when not found locally."""
    path = Path(name)
    if not path.exists() and path.parts and path.parts[0] == "fixtures":
        candidate = fixture_dir().joinpath(*path.parts[1:])
        if candidate.exists():
            return candidate
    return path


def _read(name: str) -> bytes:
    return resolve_input(name).read_bytes()


def _classification_config(args) -> ClassificationConfig:
    try:
        return ClassificationConfig(args.geom_tol, args.min_displacement, args.essence_threshold)
    except PlatialError as exc:
        raise UsageError(str(exc)) from exc


def _emit(args, report: dict) -> None:
    text = dump_report(report)
    if args.out is None:
        sys.stdout.write(text)
        return
    args.out.write_text(text, encoding="utf-8")
    print(f"wrote {args.out}")


def cmd_validate(args) -> int:
    status = EXIT_OK
    for name in args.files:
        try:
            data = _read(name)
        except OSError as exc:
            print(f"ERROR {name}: {exc}", file=sys.stderr)
            return EXIT_IO
        try:
            parsed = parse_any(data)
            if isinstance(parsed, PlatialRecordFile):
                h = build_hierarchy(parsed.records)
                for w in h.warnings:
                    print(f"WARNING {name}: {w}")
                print(f"OK {name}: {len(parsed.records)} records, {len(h.roots)} roots")
            elif isinstance(parsed, MilestoneFile):
                print(f"OK {name}: {len(parsed.tracks)} tracks")
            else:
                print(f"OK {name}: {len(parsed.timelines)} timelines")
        except PlatialError as exc:
            print(f"INVALID {name}: {exc}")
            status = EXIT_INVALID
    return status


def cmd_classify(args) -> int:
    cfg = _classification_config(args)
    tf = load_timelines(_read(args.file))
    results = []
    counts: dict[str, int] = {}
    for t in sorted(tf.timelines, key=lambda t: t.place_id):
        cls = classify(t, cfg)
        counts[cls.construction] = counts.get(cls.construction, 0) + 1
        item = {"place_id": t.place_id, "n_states": len(t), **cls.as_dict()}
        if t.place_id in tf.comments:
            item["comment"] = tf.comments[t.place_id]
        results.append(item)
    _emit(args, _report(args, cfg.as_dict(), results, {"n_timelines": len(results), "constructions": counts}))
    return EXIT_OK


def cmd_similarity(args) -> int:
    try:
        w = SimilarityWeights(*args.weights, args.spatial_scale, args.temporal_scale)
    except PlatialError as exc:
        raise UsageError(str(exc)) from exc
    places = sorted(parse_record_file(_read(args.file)).records, key=lambda p: p.id)
    matrix = similarity_matrix(places, w)
    ids = [p.id for p in places]
    csv_path = args.csv or (args.out.with_suffix(".csv") if args.out else None)
    if csv_path is not None:
        write_csv_matrix(csv_path, ids, matrix)
    config = {
        "w_spatial": w.w_spatial,
        "w_temporal": w.w_temporal,
        "w_semantic": w.w_semantic,
        "spatial_scale": w.spatial_scale,
        "temporal_scale": w.temporal_scale,
    }
    off = [v for i, row in enumerate(matrix) for j, v in enumerate(row) if j > i]
    summary = {
        "n_places": len(ids),
        "mean_similarity": math.fsum(off) / len(off) if off else None,
        "csv": None if csv_path is None else str(csv_path),
    }
    _emit(args, _report(args, config, [{"ids": ids, "matrix": matrix}], summary))
    return EXIT_OK


def cmd_mobility(args) -> int:
    cfg = _classification_config(args)
    tf = load_timelines(_read(args.file))
    timelines = sorted(tf.timelines, key=lambda t: t.place_id)
    results = []
    for t in timelines:
        events, breaks = detect_mobility_events(t, cfg, kind=tf.mobility_kinds.get(t.place_id))
        if events or breaks:
            results.append(
                {
                    "place_id": t.place_id,
                    "events": [e.as_dict() for e in events],
                    "essence_breaks": [b.as_dict() for b in breaks],
                }
            )
    summary = displacement_summary(timelines, cfg).as_dict()
    _emit(args, _report(args, cfg.as_dict(), results, summary))
    return EXIT_OK


def cmd_relocation(args) -> int:
    mf = parse_milestone_file(_read(args.file))
    as_of = math.inf if args.as_of is None else args.as_of
    s = relocation_summary(mf.tracks, as_of)
    config = {"as_of": None if args.as_of is None else format_timestamp(args.as_of)}
    _emit(args, _report(args, config, [], s.as_dict()))
    return EXIT_OK


def cmd_risk(args) -> int:
    try:
        combiner = parse_combiner(args.combiner)
    except PlatialError as exc:
        raise UsageError(str(exc)) from exc
    places = sorted(parse_record_file(_read(args.file)).records, key=lambda p: p.id)
    scores = place_risk_overlay(places, args.hazard_key, args.exposure_key, args.vulnerability_key, combiner)
    config = {
        "combiner": combiner_name(combiner),
        "hazard_key": args.hazard_key,
        "exposure_key": args.exposure_key,
        "vulnerability_key": args.vulnerability_key,
    }
    results = [{"place_id": pid, "risk": score} for pid, score in scores]
    vals = [s for _, s in scores]
    summary = {
        "n_places": len(vals),
        "mean_risk": math.fsum(vals) / len(vals) if vals else None,
        "max_risk": max(vals, default=None),
    }
    _emit(args, _report(args, config, results, summary))
    return EXIT_OK


def _report(args, config: dict, results: list, summary: dict) -> dict:
    return make_report(args.command, {"input": Path(args.file).name, **config}, results, summary)


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "similarity": cmd_similarity,
    "mobility": cmd_mobility,
    "relocation": cmd_relocation,
    "risk": cmd_risk,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"platial: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"platial: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PlatialError as exc:
        print(f"platial: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
