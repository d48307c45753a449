"""Place/sub-place hierarchies across levels of detail.

The semantic hierarchy comes from ``Place.parent`` and is authoritative.
Spatial containment is only diagnosed, since the two need not agree.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from platial.errors import CycleError, DanglingParentError, UnderivableExtentError, ValidationError
from platial.place_model import Geometry, Place, area


@dataclass(frozen=True)
class PlaceHierarchy:
    nodes: Mapping[str, Place]
    children: Mapping[str, tuple[str, ...]]
    roots: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.nodes)

    def edges(self) -> list[tuple[str, str]]:
        return [(p, c) for p in sorted(self.children) for c in self.children[p]]

    def depth(self) -> int:
        """Number of levels in the deepest root-to-leaf chain (0 when empty)."""
        best = 0
        stack = [(r, 1) for r in self.roots]
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            stack.extend((c, d + 1) for c in self.children.get(node, ()))
        return best


def build_hierarchy(places: Iterable[Place]) -> PlaceHierarchy:
    nodes: dict[str, Place] = {}
    for p in places:
        if p.id in nodes:
            raise ValidationError(f"duplicate place id {p.id!r}")
        nodes[p.id] = p

    dangling = sorted(p.id for p in nodes.values() if p.parent is not None and p.parent not in nodes)
    if dangling:
        raise DanglingParentError(
            "unresolved parent ids: " + ", ".join(f"{i} -> {nodes[i].parent}" for i in dangling)
        )

    # walk parent chains; any chain that revisits a node on the current path is a cycle
    state: dict[str, int] = {}  # 1 = on current path, 2 = done
    for start in sorted(nodes):
        path: list[str] = []
        node: str | None = start
        while node is not None and state.get(node) != 2:
            if state.get(node) == 1:
                cycle = path[path.index(node):] + [node]
                raise CycleError(cycle)
            state[node] = 1
            path.append(node)
            node = nodes[node].parent
        for n in path:
            state[n] = 2

    children: dict[str, list[str]] = {}
    warnings = []
    for p in nodes.values():
        if p.parent is not None:
            children.setdefault(p.parent, []).append(p.id)
            if p.level <= nodes[p.parent].level:
                warnings.append(
                    f"{p.id}: level {p.level} is not deeper than parent {p.parent} level {nodes[p.parent].level}"
                )
    return PlaceHierarchy(
        nodes=MappingProxyType(dict(sorted(nodes.items()))),
        children=MappingProxyType({k: tuple(sorted(v)) for k, v in sorted(children.items())}),
        roots=tuple(sorted(p.id for p in nodes.values() if p.parent is None)),
        warnings=tuple(sorted(warnings)),
    )


def derive_extent(h: PlaceHierarchy, id: str) -> Geometry:
    """Explicit geometry of ``id`` or, if absent, the union of its children's extents."""
    if id not in h.nodes:
        raise KeyError(id)
    place = h.nodes[id]
    if place.space is not None:
        return place.space
    kids = h.children.get(id, ())
    if not kids:
        raise UnderivableExtentError(f"place {id!r}: extent underivable (no geometry and no children)")
    extents = [derive_extent(h, k) for k in kids]
    if len(extents) == 1:
        return extents[0]
    crs = {g.crs for g in extents}
    if len(crs) > 1:
        raise UnderivableExtentError(f"children of {id!r} mix crs {sorted(crs)}")
    return Geometry.multi(extents)


@dataclass(frozen=True)
class EdgeConsistency:
    parent_id: str
    child_id: str
    spatially_consistent: bool
    overlap_fraction: float


@dataclass(frozen=True)
class ConsistencyReport:
    records: tuple[EdgeConsistency, ...]
    threshold: float
    skipped: int = 0
    warnings: tuple[str, ...] = field(default=())

    @property
    def n_inconsistent(self) -> int:
        return sum(not r.spatially_consistent for r in self.records)


def _overlap_fraction(child: Geometry, parent: Geometry) -> float:
    sc, sp = child.to_shapely(), parent.to_shapely()
    child_area = area(child)
    if child_area == 0.0:
        # points (or zero-area children) use containment
        return 1.0 if sp.covers(sc) else 0.0
    if child == parent:
        return 1.0
    return min(1.0, sc.intersection(sp).area / child_area)


def spatial_consistency(h: PlaceHierarchy, overlap_threshold: float = 0.9) -> ConsistencyReport:
    if not 0.0 <= overlap_threshold <= 1.0:
        raise ValidationError("overlap_threshold must be in [0, 1]")
    records = []
    skipped = 0
    warnings = list(h.warnings)
    for parent_id, child_id in h.edges():
        child, parent = h.nodes[child_id].space, h.nodes[parent_id].space
        if child is None or parent is None:
            skipped += 1
            continue
        if child.crs != parent.crs or child.crs != "planar-m":
            if child.kind == "point" and parent.kind == "point":
                frac = 1.0 if child.coords == parent.coords else 0.0
            else:
                skipped += 1
                warnings.append(f"{parent_id} -> {child_id}: overlay needs planar geometries in one crs")
                continue
        else:
            frac = _overlap_fraction(child, parent)
        records.append(EdgeConsistency(parent_id, child_id, frac >= overlap_threshold, frac))
    return ConsistencyReport(tuple(records), overlap_threshold, skipped, tuple(warnings))


def places_at_level(h: PlaceHierarchy, level: int) -> list[Place]:
    return [p for _, p in sorted(h.nodes.items()) if p.level == level]
