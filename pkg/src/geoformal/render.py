"""Deterministic serialization of documents.

The tagged dialect always emits the full tag set for the document's domain,
so renderer output is format-compliant by construction. The headed dialect
mirrors the sectioned prompt templates.
"""

from __future__ import annotations

from .ast import (
    HEADED,
    PLANE,
    TAGGED,
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
from .canon import CanonicalDocument
from .expr import Expr
from .labels import PointLabel

# Tag order: the plane inventory first, solid-only sections appended.
PLANE_SECTIONS = ("points", "lines", "circles", "semantics")
SOLID_SECTIONS = ("points", "lines", "circles", "semantics", "planes", "solids")

_HEADERS = {
    "points": "**Points:**",
    "lines": "**Lines:**",
    "circles": "**Circles:**",
    "semantics": "**Semantic Clauses:**",
    "planes": "**Planes:**",
    "solids": "**Structure:**",
}


def sections_for(domain: str) -> tuple[str, ...]:
    return PLANE_SECTIONS if domain == PLANE else SOLID_SECTIONS


def render(doc: Document, dialect: str = TAGGED) -> str:
    """Serialize a Document; parsing the result recovers equal content."""
    body = {
        "points": [f"point {p.render()}" for p in sorted(doc.points, key=PointLabel.sort_key)],
        "lines": [render_line(line) for line in doc.lines],
        "circles": [render_circle(c) for c in doc.circles],
        "planes": [render_plane(p) for p in doc.planes],
        "solids": [render_solid(s) for s in doc.solids],
        "semantics": [render_clause(c) for c in doc.semantics],
    }
    if dialect == HEADED:
        point_list = "[%s]" % ", ".join(
            p.render() for p in sorted(doc.points, key=PointLabel.sort_key)
        )
        body["points"] = [point_list] if doc.points else []
        # the Structure template writes bare solid lines
        body["solids"] = [render_solid(s, bare=True) for s in doc.solids]
        return _emit(doc.domain, body, tagged=False)
    return _emit(doc.domain, body, tagged=True)


def render_canonical(cdoc: CanonicalDocument) -> str:
    """Render a canonical document: sorted keys under the tagged layout."""
    body = {name: sorted(cdoc.category(name)) for name in sections_for(cdoc.domain)}
    body["points"] = [f"point {p}" for p in sorted(cdoc.points)]
    return _emit(cdoc.domain, body, tagged=True)


def _emit(domain: str, body: dict[str, list[str]], tagged: bool) -> str:
    out: list[str] = []
    for section in sections_for(domain):
        statements = body.get(section, [])
        if tagged:
            out.append(f"<{section}>")
            out.extend(statements)
            out.append(f"</{section}>")
        else:
            out.append(_HEADERS[section])
            out.extend(statements)
    return "\n".join(out) + "\n"


def render_line(line: Line) -> str:
    parts = ["line"]
    if line.name is not None:
        parts += [line.name, "lineson"]
    parts += [p.render() for p in line.points]
    return " ".join(parts)


def render_circle(circle: Circle) -> str:
    text = f"\\odot {circle.center.render()} lieson"
    if circle.on_points:
        text += " " + " ".join(p.render() for p in sorted(circle.on_points, key=PointLabel.sort_key))
    return text


def render_plane(plane: Plane) -> str:
    return "plane " + " ".join(p.render() for p in plane.points)


def render_solid(solid: Solid, bare: bool = False) -> str:
    groups = "-".join("".join(p.render() for p in group) for group in solid.groups)
    if bare:
        return f"{solid.kind} {groups}"
    return f"solid {solid.kind} {groups}"


def _seg(seg) -> str:
    return seg[0].render() + seg[1].render()


def render_clause(clause: SemanticClause) -> str:
    if isinstance(clause, SegmentEq):
        rhs = clause.rhs.raw if isinstance(clause.rhs, Expr) else _seg(clause.rhs)
        return f"{_seg(clause.lhs)} = {rhs}"
    if isinstance(clause, AngleMeasure):
        run = clause.p1.render() + clause.vertex.render() + clause.p3.render()
        return f"m \\angle {run} = {clause.value.raw}"
    if isinstance(clause, ArcMeasure):
        return f"m \\widehat {clause.p1.render()}{clause.p2.render()} = {clause.value.raw}"
    if isinstance(clause, Perp):
        text = f"{_seg(clause.seg1)} \\perp {_seg(clause.seg2)}"
        if clause.foot is not None:
            text += f" on {clause.foot.render()}"
        return text
    if isinstance(clause, Parallel):
        return f"{_seg(clause.seg1)} \\parallel {_seg(clause.seg2)}"
    raise TypeError(f"not a semantic clause: {clause!r}")
