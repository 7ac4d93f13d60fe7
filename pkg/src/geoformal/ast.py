"""Node types for parsed formal descriptions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .expr import Expr
from .labels import PointLabel

PLANE = "plane"
SOLID = "solid"
DOMAINS = (PLANE, SOLID)

TAGGED = "tagged"
HEADED = "headed"

SOLID_KINDS = ("Cube", "Prism", "Pyramid", "Frustum", "Cylinder", "Cone", "FrustumCone", "Spheroid")
# Table-style spelling variant, normalized on parse.
SOLID_KIND_ALIASES = {"Spheriod": "Spheroid"}

Pos = tuple[int, int]
Segment = tuple[PointLabel, PointLabel]


# Arity and duplicate-point rules for lines and planes are enforced by the
# parser (diagnostics) and re-checked by the validator, so degenerate
# documents remain representable for reporting.


@dataclass(frozen=True)
class Line:
    points: tuple[PointLabel, ...]
    name: str | None = None
    pos: Pos | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Circle:
    center: PointLabel
    on_points: frozenset[PointLabel] = frozenset()
    pos: Pos | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.center in self.on_points:
            raise ValueError("circle center cannot lie on its own rim")


@dataclass(frozen=True)
class Plane:
    points: tuple[PointLabel, ...]
    pos: Pos | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Solid:
    kind: str
    groups: tuple[tuple[PointLabel, ...], ...]
    pos: Pos | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in SOLID_KINDS:
            raise ValueError(f"unknown solid kind {self.kind!r}")
        _check_solid_groups(self.kind, self.groups)


def _check_solid_groups(kind: str, groups) -> None:
    sizes = [len(g) for g in groups]
    if kind in ("Cube", "Prism", "Frustum"):
        if len(groups) != 2 or sizes[0] != sizes[1] or sizes[0] < 3:
            raise ValueError(f"{kind} needs two faces of equal size >= 3")
    elif kind == "Pyramid":
        if len(groups) != 2 or sizes[0] != 1 or sizes[1] < 3:
            raise ValueError("Pyramid needs an apex and a base of >= 3 points")
    elif kind == "Cone":
        if len(groups) != 2 or sizes[0] != 1 or sizes[1] != 2:
            raise ValueError("Cone needs an apex and a center/base-point pair")
    elif kind in ("Cylinder", "FrustumCone"):
        if len(groups) != 2 or not all(n in (1, 2) for n in sizes):
            raise ValueError(f"{kind} needs two groups of 1 or 2 points each")
    elif kind == "Spheroid":
        if not 1 <= len(groups) <= 2 or sizes[0] != 1 or (len(groups) == 2 and sizes[1] < 1):
            raise ValueError("Spheroid needs a center, optionally with surface points")


@dataclass(frozen=True)
class SegmentEq:
    lhs: Segment
    rhs: Union[Segment, Expr]
    pos: Pos | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class AngleMeasure:
    p1: PointLabel
    vertex: PointLabel
    p3: PointLabel
    value: Expr
    pos: Pos | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ArcMeasure:
    p1: PointLabel
    p2: PointLabel
    value: Expr
    pos: Pos | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Perp:
    seg1: Segment
    seg2: Segment
    foot: PointLabel | None = None
    pos: Pos | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Parallel:
    seg1: Segment
    seg2: Segment
    pos: Pos | None = field(default=None, compare=False, repr=False)


SemanticClause = Union[SegmentEq, AngleMeasure, ArcMeasure, Perp, Parallel]


@dataclass
class Document:
    """A parsed formal description of one diagram.

    Plane documents may still carry planes/solids lists; they are empty by
    content in that domain, not by construction.
    """

    domain: str = PLANE
    points: set[PointLabel] = field(default_factory=set)
    lines: list[Line] = field(default_factory=list)
    circles: list[Circle] = field(default_factory=list)
    planes: list[Plane] = field(default_factory=list)
    solids: list[Solid] = field(default_factory=list)
    semantics: list[SemanticClause] = field(default_factory=list)
    dialect: str = TAGGED

    def referenced_points(self) -> set[PointLabel]:
        """Every label used by a primitive or clause (declared or not)."""
        seen: set[PointLabel] = set()
        for line in self.lines:
            seen.update(line.points)
        for circle in self.circles:
            seen.add(circle.center)
            seen.update(circle.on_points)
        for plane in self.planes:
            seen.update(plane.points)
        for solid in self.solids:
            for group in solid.groups:
                seen.update(group)
        for clause in self.semantics:
            seen.update(_clause_points(clause))
        return seen


def _clause_points(clause: SemanticClause) -> set[PointLabel]:
    if isinstance(clause, SegmentEq):
        pts = set(clause.lhs)
        if not isinstance(clause.rhs, Expr):
            pts.update(clause.rhs)
        return pts
    if isinstance(clause, AngleMeasure):
        return {clause.p1, clause.vertex, clause.p3}
    if isinstance(clause, ArcMeasure):
        return {clause.p1, clause.p2}
    if isinstance(clause, Perp):
        pts = set(clause.seg1) | set(clause.seg2)
        if clause.foot is not None:
            pts.add(clause.foot)
        return pts
    return set(clause.seg1) | set(clause.seg2)
