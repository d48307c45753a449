"""Platial-mobility events, relocation milestones and risk scoring."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from platial.classification import ClassificationConfig
from platial.errors import ValidationError
from platial.place_model import Place, PlaceTimeline, TimeSpec, centroid_distance, format_timestamp
from platial.similarity import semantic_distance

MOBILITY_KINDS = ("corporeal", "object", "imaginative", "virtual", "communicative")
MILESTONE_KINDS = (
    "disaster_occurrence",
    "zone_designation",
    "agreement_deadline",
    "contract_signed",
    "removal_complete",
)
RELOCATION_MODES = ("relocation", "displacement")


@dataclass(frozen=True)
class MobilityEvent:
    place_id: str
    from_state_index: int
    to_state_index: int
    displacement: float
    essence_similarity: float
    from_time: TimeSpec
    to_time: TimeSpec
    kind: str | None = None

    def as_dict(self) -> dict:
        return {
            "place_id": self.place_id,
            "from_state_index": self.from_state_index,
            "to_state_index": self.to_state_index,
            "displacement": self.displacement,
            "essence_similarity": self.essence_similarity,
            "from_time": format_timestamp(self.from_time.start),
            "to_time": format_timestamp(self.to_time.start),
            "kind": self.kind,
        }


@dataclass(frozen=True)
class EssenceBreak:
    """A displacement after which the place no longer carries the same meaning."""

    place_id: str
    from_state_index: int
    to_state_index: int
    displacement: float
    semantic_distance: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def detect_mobility_events(
    t: PlaceTimeline,
    c: ClassificationConfig,
    kind: str | None = None,
) -> tuple[list[MobilityEvent], list[EssenceBreak]]:
    """Scan consecutive states for displacements beyond ``c.min_displacement``.

    Each displaced pair becomes either a :class:`MobilityEvent` (meaning
    preserved) or an :class:`EssenceBreak`. ``kind`` is caller-supplied
    metadata copied onto every event; it is never inferred.
    """
    if kind is not None and kind not in MOBILITY_KINDS:
        raise ValidationError(f"mobility kind must be one of {MOBILITY_KINDS}, got {kind!r}")
    geoms = [s.require_space() for s in t.states]
    events: list[MobilityEvent] = []
    breaks: list[EssenceBreak] = []
    for i, s0, s1 in t.pairs():
        moved = centroid_distance(geoms[i], geoms[i + 1])
        if moved <= c.min_displacement:
            continue
        sd = semantic_distance(s0.meaning, s1.meaning)
        if sd <= c.max_semantic_distance:
            events.append(MobilityEvent(t.place_id, i, i + 1, moved, 1.0 - sd, s0.time, s1.time, kind))
        else:
            breaks.append(EssenceBreak(t.place_id, i, i + 1, moved, sd))
    return events, breaks


@dataclass(frozen=True)
class DisplacementSummary:
    n_places: int = 0
    n_events: int = 0
    n_essence_breaks: int = 0
    total_displacement: float = 0.0
    max_displacement: float = 0.0

    @property
    def mean_displacement(self) -> float:
        return self.total_displacement / self.n_events if self.n_events else 0.0

    def merge(self, other: DisplacementSummary) -> DisplacementSummary:
        return DisplacementSummary(
            self.n_places + other.n_places,
            self.n_events + other.n_events,
            self.n_essence_breaks + other.n_essence_breaks,
            self.total_displacement + other.total_displacement,
            max(self.max_displacement, other.max_displacement),
        )

    def as_dict(self) -> dict:
        return {
            "n_places": self.n_places,
            "n_events": self.n_events,
            "n_essence_breaks": self.n_essence_breaks,
            "total_displacement": self.total_displacement,
            "mean_displacement": self.mean_displacement,
            "max_displacement": self.max_displacement,
        }


def displacement_summary(timelines: Iterable[PlaceTimeline], c: ClassificationConfig) -> DisplacementSummary:
    """Aggregate detected events over timelines; displacement stats cover events only."""
    n_places = n_events = n_breaks = 0
    displacements: list[float] = []
    for t in timelines:
        events, breaks = detect_mobility_events(t, c)
        n_places += 1
        n_events += len(events)
        n_breaks += len(breaks)
        displacements.extend(e.displacement for e in events)
    return DisplacementSummary(
        n_places=n_places,
        n_events=n_events,
        n_essence_breaks=n_breaks,
        total_displacement=math.fsum(displacements),
        max_displacement=max(displacements, default=0.0),
    )


# -- relocation ---------------------------------------------------------------


@dataclass(frozen=True)
class Milestone:
    kind: str
    at: int

    def __post_init__(self) -> None:
        if self.kind not in MILESTONE_KINDS:
            raise ValidationError(f"milestone kind must be one of {MILESTONE_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class RelocationTrack:
    household_id: str
    milestones: tuple[Milestone, ...]
    mode: str = "relocation"

    def __post_init__(self) -> None:
        object.__setattr__(self, "milestones", tuple(self.milestones))
        if not self.household_id:
            raise ValidationError("household_id must be non-empty")
        if self.mode not in RELOCATION_MODES:
            raise ValidationError(f"{self.household_id}: mode must be one of {RELOCATION_MODES}")
        kinds = [m.kind for m in self.milestones]
        if len(set(kinds)) != len(kinds):
            raise ValidationError(f"{self.household_id}: at most one milestone per kind")
        ordered = sorted(self.milestones, key=lambda m: MILESTONE_KINDS.index(m.kind))
        for m0, m1 in zip(ordered, ordered[1:]):
            if m1.at < m0.at:
                raise ValidationError(f"{self.household_id}: {m1.kind} precedes {m0.kind}")

    def reached(self, kind: str, as_of: float) -> bool:
        return any(m.kind == kind and m.at <= as_of for m in self.milestones)


@dataclass(frozen=True)
class RelocationSummary:
    as_of: float
    eligible: int
    counts: dict[str, int]
    by_mode: dict[str, int] = field(default_factory=dict)

    @property
    def signed(self) -> int:
        return self.counts["contract_signed"]

    @property
    def moved(self) -> int:
        return self.counts["removal_complete"]

    def as_dict(self) -> dict:
        return {
            "as_of": None if math.isinf(self.as_of) else format_timestamp(int(self.as_of)),
            "eligible": self.eligible,
            "signed": self.signed,
            "moved": self.moved,
            "counts": dict(self.counts),
            "by_mode": dict(self.by_mode),
        }


def relocation_summary(tracks: Sequence[RelocationTrack], as_of: float = math.inf) -> RelocationSummary:
    """Per-kind counts of tracks whose milestone happened on or before ``as_of`` (ms)."""
    counts = {k: sum(t.reached(k, as_of) for t in tracks) for k in MILESTONE_KINDS}
    modes = Counter(t.mode for t in tracks)
    return RelocationSummary(
        as_of=as_of,
        eligible=len(tracks),
        counts=counts,
        by_mode={m: modes.get(m, 0) for m in RELOCATION_MODES},
    )


# -- risk ---------------------------------------------------------------------


@dataclass(frozen=True)
class RiskProfile:
    hazard: float
    exposure: float
    vulnerability: float

    def __post_init__(self) -> None:
        for name in ("hazard", "exposure", "vulnerability"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and 0.0 <= v <= 1.0):
                raise ValidationError(f"risk {name} must be in [0, 1], got {v!r}")


@dataclass(frozen=True)
class WeightedGeometric:
    w_hazard: float
    w_exposure: float
    w_vulnerability: float

    def __post_init__(self) -> None:
        ws = (self.w_hazard, self.w_exposure, self.w_vulnerability)
        if any(not (w > 0 and math.isfinite(w)) for w in ws):
            raise ValidationError("geometric risk weights must be positive")
        if abs(sum(ws) - 1.0) > 1e-9:
            raise ValidationError(f"geometric risk weights must sum to 1, got {sum(ws)}")


Combiner = str | WeightedGeometric


def parse_combiner(text: str) -> Combiner:
    """``product`` or ``geometric:wh,we,wv``."""
    if text == "product":
        return "product"
    if text.startswith("geometric:"):
        try:
            ws = [float(v) for v in text.split(":", 1)[1].split(",")]
        except ValueError as exc:
            raise ValidationError(f"bad geometric weights in {text!r}") from exc
        if len(ws) != 3:
            raise ValidationError("geometric combiner needs three weights")
        return WeightedGeometric(*ws)
    raise ValidationError(f"unknown combiner {text!r}")


def combiner_name(combiner: Combiner) -> str:
    if isinstance(combiner, WeightedGeometric):
        return f"geometric:{combiner.w_hazard!r},{combiner.w_exposure!r},{combiner.w_vulnerability!r}"
    return combiner


def risk_score(r: RiskProfile, combiner: Combiner = "product") -> float:
    if combiner == "product":
        return r.hazard * r.exposure * r.vulnerability
    if isinstance(combiner, WeightedGeometric):
        return (
            r.hazard**combiner.w_hazard
            * r.exposure**combiner.w_exposure
            * r.vulnerability**combiner.w_vulnerability
        )
    raise ValidationError(f"unknown combiner {combiner!r}")


def place_risk_overlay(
    places: Sequence[Place],
    hazard_key: str = "hazard",
    exposure_key: str = "exposure",
    vulnerability_key: str = "vulnerability",
    combiner: Combiner = "product",
) -> list[tuple[str, float]]:
    keys = (hazard_key, exposure_key, vulnerability_key)
    problems = []
    profiles = []
    for p in places:
        vals = []
        for k in keys:
            d = p.meaning.get(k)
            if d is None:
                problems.append(f"{p.id}: missing {k!r}")
            elif d.kind != "numeric" or d.range != (0.0, 1.0):
                problems.append(f"{p.id}: {k!r} must be numeric with range [0, 1]")
            else:
                vals.append(d.value)
        if len(vals) == 3:
            profiles.append((p.id, RiskProfile(*vals)))
    if problems:
        raise ValidationError("risk overlay: " + "; ".join(problems))
    return [(pid, risk_score(r, combiner)) for pid, r in profiles]
