"""Platial taxonomy over place timelines.

Four facets come from the place-type taxonomy (boundary, lifespan,
movability, instantiation); the fifth is the space-time construction cell
(fixed/changing time x fixed/changing space).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from platial.errors import ValidationError
from platial.place_model import PlaceTimeline, centroid_distance, geometry_change
from platial.similarity import semantic_distance

CONSTRUCTIONS = ("FT_FS", "FT_CS", "CT_FS", "CT_CS")

# "Place" column of the space-time construction table, reported verbatim
CONSTRUCTION_LABELS = {
    "FT_FS": 'Place is driven by meaning only ("1-D")',
    "FT_CS": 'Driven by meaning, and changing spaces ("2-D")',
    "CT_FS": 'Driven by changing time and meaning ("2-D")',
    "CT_CS": 'Driven by change in meaning, time and space ("3-D")',
}


@dataclass(frozen=True)
class ClassificationConfig:
    geom_tolerance: float = 0.05
    min_displacement: float = 50.0  # metres
    essence_threshold: float = 0.6

    def __post_init__(self) -> None:
        if not 0.0 <= self.geom_tolerance <= 1.0:
            raise ValidationError("geom_tolerance must be in [0, 1]")
        if not self.min_displacement >= 0.0:
            raise ValidationError("min_displacement must be non-negative metres")
        if not 0.0 <= self.essence_threshold <= 1.0:
            raise ValidationError("essence_threshold must be in [0, 1]")

    @property
    def max_semantic_distance(self) -> float:
        """Largest semantic distance at which a moved place keeps its essence."""
        return 1.0 - self.essence_threshold

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PlatialClass:
    boundary: str
    lifespan: str
    status: str
    movability: str
    instantiation: str
    construction: str

    @property
    def construction_label(self) -> str:
        return CONSTRUCTION_LABELS[self.construction]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["construction_label"] = self.construction_label
        return d


def _spaces(t: PlaceTimeline):
    return [s.require_space() for s in t.states]


def classify_boundary(t: PlaceTimeline, c: ClassificationConfig) -> str:
    """``dynamic`` when consecutive shapes differ beyond tolerance after centroid alignment."""
    geoms = _spaces(t)
    for g0, g1 in zip(geoms, geoms[1:]):
        if geometry_change(g0, g1, align_centroids=True) > c.geom_tolerance:
            return "dynamic"
    return "static"


def classify_lifespan(t: PlaceTimeline) -> tuple[str, str]:
    # dissolution without a planned end is an intervention, not a predefined lifespan
    lifespan = "temporary" if any(s.lifecycle.planned_end is not None for s in t.states) else "permanent"
    status = "dissolved" if any(s.lifecycle.dissolved_at is not None for s in t.states) else "active"
    return lifespan, status


def classify_movability(t: PlaceTimeline, c: ClassificationConfig) -> str:
    geoms = _spaces(t)
    if any(s.lifecycle.essence_bound_to_location for s in t.states):
        return "immovable"
    for (s0, g0), (s1, g1) in zip(zip(t.states, geoms), zip(t.states[1:], geoms[1:])):
        if centroid_distance(g0, g1) > c.min_displacement:
            if semantic_distance(s0.meaning, s1.meaning) <= c.max_semantic_distance:
                return "movable"
    return "undetermined"


def classify_instantiation(t: PlaceTimeline) -> str:
    kinds = {s.lifecycle.instantiation for s in t.states}
    if len(kinds) > 1:
        raise ValidationError(f"timeline {t.place_id!r}: states disagree on instantiation {sorted(kinds)}")
    return t.states[0].lifecycle.instantiation


def spacetime_construction(t: PlaceTimeline, c: ClassificationConfig) -> str:
    """Cell of the fixed/changing time x fixed/changing space matrix.

    Space changes are tested without alignment, so displacement counts, and
    over every pair of states, so slow drift and same-time alternatives are
    both caught.
    """
    geoms = _spaces(t)
    changing_time = len({s.time for s in t.states}) >= 2
    changing_space = any(
        geometry_change(geoms[i], geoms[j]) > c.geom_tolerance
        for i in range(len(geoms))
        for j in range(i + 1, len(geoms))
    )
    return f"{'CT' if changing_time else 'FT'}_{'CS' if changing_space else 'FS'}"


def classify(t: PlaceTimeline, c: ClassificationConfig | None = None) -> PlatialClass:
    c = c or ClassificationConfig()
    lifespan, status = classify_lifespan(t)
    return PlatialClass(
        boundary=classify_boundary(t, c),
        lifespan=lifespan,
        status=status,
        movability=classify_movability(t, c),
        instantiation=classify_instantiation(t),
        construction=spacetime_construction(t, c),
    )
