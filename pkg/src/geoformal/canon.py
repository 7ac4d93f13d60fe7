"""Canonical keys and canonical documents.

Each primitive type declares a symmetry group; the canonical key is the
minimal rendering over that group, so set intersection over keys realizes
equality-up-to-symmetry:

  lines                reversal
  circles              rim points are a set
  planes               unordered point set (default) or dihedral cycle (strict)
  Cube/Prism/Frustum   simultaneous rotation/reflection of both faces
  Pyramid              apex fixed; base as plane above
  Cone                 none (apex, center, base point are positional)
  Cylinder/FrustumCone each group unordered, group pair unordered
  Spheroid             surface points are a set
  angle                arm swap around the fixed vertex
  arc                  endpoints unordered
  perp/parallel        endpoint order and operand order free (foot fixed)
  segment equation     endpoint order free; side order free when both sides
                       are segments

Keys are themselves grammatical statements, so a canonical document can be
rendered and re-canonicalized to an identical value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    AngleMeasure,
    ArcMeasure,
    Circle,
    Document,
    Line,
    Parallel,
    Perp,
    Plane,
    SegmentEq,
    SemanticClause,
    Solid,
)
from .expr import Expr
from .labels import PointLabel

CATEGORIES = ("points", "lines", "circles", "planes", "solids", "semantics")


@dataclass(frozen=True)
class CanonMode:
    """Canonicalization flags; both sides of a match must agree."""

    strict_cyclic: bool = False

    @classmethod
    def from_dict(cls, data: dict | None) -> "CanonMode":
        data = data or {}
        unknown = set(data) - {"strict_cyclic"}
        if unknown:
            raise ValueError(f"unknown canonical mode flags: {sorted(unknown)}")
        return cls(strict_cyclic=bool(data.get("strict_cyclic", False)))

    def to_dict(self) -> dict:
        return {"strict_cyclic": self.strict_cyclic}


@dataclass(frozen=True)
class CanonicalDocument:
    domain: str
    mode: CanonMode
    points: frozenset[str]
    lines: frozenset[str]
    circles: frozenset[str]
    planes: frozenset[str]
    solids: frozenset[str]
    semantics: frozenset[str]

    def category(self, name: str) -> frozenset[str]:
        return getattr(self, name)

    def solid_kinds(self) -> tuple[str, ...]:
        """Multiset of solid categories, sorted."""
        return tuple(sorted(key.split()[1] for key in self.solids))


def canonicalize(doc: Document, mode: CanonMode = CanonMode()) -> CanonicalDocument:
    """Collapse a Document to per-type sets of canonical keys."""
    return CanonicalDocument(
        domain=doc.domain,
        mode=mode,
        points=frozenset(label.render() for label in doc.points),
        lines=frozenset(line_key(line) for line in doc.lines),
        circles=frozenset(circle_key(circle) for circle in doc.circles),
        planes=frozenset(plane_key(plane, mode) for plane in doc.planes),
        solids=frozenset(solid_key(solid, mode) for solid in doc.solids),
        semantics=frozenset(clause_key(clause, mode) for clause in doc.semantics),
    )


def _spaced(labels) -> str:
    return " ".join(label.render() for label in labels)


def _run(labels) -> str:
    return "".join(label.render() for label in labels)


def _sorted_labels(labels) -> tuple[PointLabel, ...]:
    return tuple(sorted(labels, key=PointLabel.sort_key))


def _render_tuple(labels) -> tuple[str, ...]:
    return tuple(label.render() for label in labels)


def line_key(line: Line) -> str:
    """Reversal-invariant; the `lineson` name is an attribute, not identity."""
    forward = _render_tuple(line.points)
    backward = tuple(reversed(forward))
    return "line " + " ".join(min(forward, backward))


def circle_key(circle: Circle) -> str:
    key = f"\\odot {circle.center.render()} lieson"
    if circle.on_points:
        key += " " + _spaced(_sorted_labels(circle.on_points))
    return key


def _min_cycle(labels) -> tuple[PointLabel, ...]:
    """Minimal rotation over both traversal directions."""
    best = None
    for seq in (tuple(labels), tuple(reversed(labels))):
        for shift in range(len(seq)):
            rotated = seq[shift:] + seq[:shift]
            if best is None or _render_tuple(rotated) < _render_tuple(best):
                best = rotated
    return best


def plane_key(plane: Plane, mode: CanonMode) -> str:
    if mode.strict_cyclic:
        return "plane " + _spaced(_min_cycle(plane.points))
    return "plane " + _spaced(_sorted_labels(plane.points))


def solid_key(solid: Solid, mode: CanonMode) -> str:
    kind = solid.kind
    if kind in ("Cube", "Prism", "Frustum"):
        groups = _align_faces(solid.groups[0], solid.groups[1])
    elif kind == "Pyramid":
        base = _min_cycle(solid.groups[1]) if mode.strict_cyclic else _sorted_labels(solid.groups[1])
        groups = (solid.groups[0], base)
    elif kind == "Cone":
        groups = solid.groups
    elif kind in ("Cylinder", "FrustumCone"):
        normalized = sorted(
            (_sorted_labels(group) for group in solid.groups),
            key=_render_tuple,
        )
        groups = tuple(normalized)
    else:  # Spheroid
        if len(solid.groups) == 1:
            groups = solid.groups
        else:
            groups = (solid.groups[0], _sorted_labels(solid.groups[1]))
    return f"solid {kind} " + "-".join(_run(group) for group in groups)


def _align_faces(base, top):
    """Minimal simultaneous rotation/reflection keeping base[i] over top[i]."""
    n = len(base)
    best = None
    for flip in (False, True):
        b = tuple(reversed(base)) if flip else tuple(base)
        t = tuple(reversed(top)) if flip else tuple(top)
        for shift in range(n):
            candidate = (b[shift:] + b[:shift], t[shift:] + t[:shift])
            rendered = tuple(_render_tuple(g) for g in candidate)
            if best is None or rendered < best[0]:
                best = (rendered, candidate)
    return best[1]


def _norm_segment(seg) -> tuple[PointLabel, PointLabel]:
    a, b = seg
    return (a, b) if a.sort_key() <= b.sort_key() else (b, a)


def _segment_pair(seg1, seg2):
    one, two = _norm_segment(seg1), _norm_segment(seg2)
    return (one, two) if _render_tuple(one) <= _render_tuple(two) else (two, one)


def _value_key(value: Expr) -> str:
    return value.canonical()


def clause_key(clause: SemanticClause, mode: CanonMode) -> str:
    if isinstance(clause, SegmentEq):
        lhs = _norm_segment(clause.lhs)
        if isinstance(clause.rhs, Expr):
            return f"{_run(lhs)} = {_value_key(clause.rhs)}"
        one, two = _segment_pair(clause.lhs, clause.rhs)
        return f"{_run(one)} = {_run(two)}"
    if isinstance(clause, AngleMeasure):
        ends = sorted((clause.p1, clause.p3), key=PointLabel.sort_key)
        run = _run((ends[0], clause.vertex, ends[1]))
        return f"m \\angle {run} = {_value_key(clause.value)}"
    if isinstance(clause, ArcMeasure):
        # arc direction is unspecified in the source templates: unordered
        ends = _sorted_labels((clause.p1, clause.p2))
        return f"m \\widehat {_run(ends)} = {_value_key(clause.value)}"
    if isinstance(clause, Perp):
        one, two = _segment_pair(clause.seg1, clause.seg2)
        key = f"{_run(one)} \\perp {_run(two)}"
        if clause.foot is not None:
            key += f" on {clause.foot.render()}"
        return key
    one, two = _segment_pair(clause.seg1, clause.seg2)
    return f"{_run(one)} \\parallel {_run(two)}"
