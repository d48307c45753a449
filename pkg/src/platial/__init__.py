"""Platio-temporal place model and platial-mobility analytics."""

__version__ = "0.1.0"

from platial.errors import PlatialError, ValidationError  # noqa: E402
from platial.place_model import (  # noqa: E402
    Geometry,
    Lifecycle,
    MeaningDimension,
    MeaningVector,
    Place,
    PlaceTimeline,
    SpaceTimeAnchor,
    TimeSpec,
    centroid,
    geometry_change,
    temporal_gap,
)

__all__ = [
    "Geometry",
    "Lifecycle",
    "MeaningDimension",
    "MeaningVector",
    "Place",
    "PlaceTimeline",
    "PlatialError",
    "SpaceTimeAnchor",
    "TimeSpec",
    "ValidationError",
    "centroid",
    "geometry_change",
    "temporal_gap",
]
