"""Reference-free checks: tag compliance, internal consistency, redundancy.

check_format feeds the binary format reward; consistency and redundancy
findings report annotation-rule violations without blocking anything.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .ast import PLANE, AngleMeasure, Document, Expr, Perp
from .canon import CanonMode, circle_key, clause_key, line_key, plane_key, solid_key
from .labels import PointLabel
from .parser import parse_statement, scan
from .render import sections_for

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"

# Fixed rule registry; every finding cites exactly one of these.
RULES = {
    "missing-tag": SEVERITY_ERROR,
    "duplicate-tag": SEVERITY_ERROR,
    "tag-nesting": SEVERITY_ERROR,
    "unexpected-tag": SEVERITY_ERROR,
    "malformed-statement": SEVERITY_ERROR,
    "misplaced-statement": SEVERITY_ERROR,
    "section-order": SEVERITY_WARNING,
    "undeclared-point": SEVERITY_ERROR,
    "line-arity": SEVERITY_ERROR,
    "plane-arity": SEVERITY_ERROR,
    "duplicate-primitive": SEVERITY_ERROR,
    "perp-foot-off-line": SEVERITY_ERROR,
    "split-line": SEVERITY_WARNING,
    "non-maximal-plane": SEVERITY_WARNING,
    "right-angle-duplication": SEVERITY_WARNING,
    "collinear-duplicate-perp": SEVERITY_WARNING,
}

_SECTION_TYPE = {
    "points": "point",
    "lines": "line",
    "circles": "circle",
    "planes": "plane",
    "solids": "solid",
    "semantics": "semantic",
}


@dataclass
class LintFinding:
    rule: str
    severity: str
    message: str
    line: int | None = None
    col: int | None = None

    def __post_init__(self):
        assert self.rule in RULES, f"unknown rule {self.rule!r}"

    def to_json_dict(self) -> dict:
        return {
            "rule": self.rule,
            "severity": self.severity,
            "line": self.line,
            "column": self.col,
            "message": self.message,
        }


def _finding(rule: str, message: str, pos=None) -> LintFinding:
    line, col = pos if pos is not None else (None, None)
    return LintFinding(rule, RULES[rule], message, line, col)


@dataclass
class FormatReport:
    is_compliant: bool
    missing_tags: list[str]
    malformed_statements: int
    diagnostics: list[LintFinding] = field(default_factory=list)


def check_format(text: str, domain: str = PLANE) -> FormatReport:
    """Tag compliance for the tagged dialect.

    Compliant iff every required tag appears exactly once, opens and closes
    match, and every non-blank line inside a tag parses as a statement of
    that section's type. Content outside tags is ignored; tag ordering is
    only a warning.
    """
    required = sections_for(domain)
    issues: list[LintFinding] = []
    completed: Counter[str] = Counter()
    open_order: list[str] = []
    current: str | None = None

    for piece in scan(text):
        pos = (piece.line, piece.col)
        if piece.kind == "tag_open":
            if current is not None:
                issues.append(_finding("tag-nesting", f"<{piece.value}> opened inside <{current}>", pos))
            if piece.value not in required:
                issues.append(_finding("unexpected-tag", f"tag <{piece.value}> not in the {domain} inventory", pos))
            elif completed[piece.value] or piece.value in open_order:
                issues.append(_finding("duplicate-tag", f"tag <{piece.value}> appears more than once", pos))
            if piece.value in required and piece.value not in open_order:
                open_order.append(piece.value)
            current = piece.value
        elif piece.kind == "tag_close":
            if current == piece.value:
                completed[piece.value] += 1
                current = None
            else:
                issues.append(_finding("tag-nesting", f"stray or mismatched </{piece.value}>", pos))
        elif piece.kind == "header":
            if current is not None:
                issues.append(_finding("malformed-statement", f"header inside <{current}>", pos))
        elif piece.kind == "error":
            if current is not None:
                issues.append(_finding("malformed-statement", piece.diagnostic.message, pos))
        else:  # statement
            if current is None:
                continue
            stype, _, diags = parse_statement(piece.tokens)
            if diags:
                issues.append(_finding("malformed-statement", diags[0].message, pos))
            elif stype != "none" and _SECTION_TYPE.get(current) not in (None, stype):
                issues.append(
                    _finding("misplaced-statement", f"{stype} statement inside <{current}>", pos)
                )

    if current is not None:
        issues.append(_finding("missing-tag", f"tag <{current}> never closed"))
    missing = [name for name in required if completed[name] == 0]
    for name in missing:
        if not any(f.rule == "missing-tag" and f"<{name}>" in f.message for f in issues):
            issues.append(_finding("missing-tag", f"tag <{name}> missing"))

    expected_order = [name for name in required if name in open_order]
    if open_order != expected_order:
        issues.append(_finding("section-order", f"sections appear as {open_order}, canonical order is {list(expected_order)}"))

    malformed = sum(
        1 for f in issues if f.severity == SEVERITY_ERROR and f.rule != "missing-tag"
    )
    return FormatReport(
        is_compliant=not missing and malformed == 0,
        missing_tags=missing,
        malformed_statements=malformed,
        diagnostics=issues,
    )


def check_consistency(doc: Document) -> list[LintFinding]:
    """Structural errors: dangling references, arity, duplicates, bad feet."""
    findings: list[LintFinding] = []
    declared = doc.points

    for label in sorted(doc.referenced_points() - declared, key=PointLabel.sort_key):
        findings.append(
            _finding("undeclared-point", f"point {label.render()} used but never declared")
        )

    for line in doc.lines:
        if len(line.points) < 2 or len(set(line.points)) != len(line.points):
            findings.append(_finding("line-arity", f"degenerate line {line_key(line)!r}", line.pos))
    for plane in doc.planes:
        if len(plane.points) < 3 or len(set(plane.points)) != len(plane.points):
            findings.append(
                _finding("plane-arity", "plane needs at least 3 distinct points", plane.pos)
            )

    mode = CanonMode()
    for category, nodes, keyfn in (
        ("line", doc.lines, line_key),
        ("circle", doc.circles, circle_key),
        ("plane", doc.planes, lambda p: plane_key(p, mode)),
        ("solid", doc.solids, lambda s: solid_key(s, mode)),
        ("clause", doc.semantics, lambda c: clause_key(c, mode)),
    ):
        seen: dict[str, int] = {}
        for node in nodes:
            key = keyfn(node)
            seen[key] = seen.get(key, 0) + 1
            if seen[key] == 2:
                findings.append(
                    _finding("duplicate-primitive", f"duplicate {category} {key!r}", node.pos)
                )

    for clause in doc.semantics:
        if not isinstance(clause, Perp) or clause.foot is None:
            continue
        for seg in (clause.seg1, clause.seg2):
            if clause.foot in seg:
                continue
            covering = [l for l in doc.lines if set(seg) <= set(l.points)]
            if covering and all(clause.foot not in l.points for l in covering):
                findings.append(
                    _finding(
                        "perp-foot-off-line",
                        f"foot {clause.foot.render()} is not on the declared line through "
                        f"{seg[0].render()}{seg[1].render()}",
                        clause.pos,
                    )
                )
    return findings


def lint_redundancy(doc: Document) -> list[LintFinding]:
    """Warnings for annotation-rule violations: split lines, subset planes,
    right angles duplicating a perpendicularity, collapsible perp clauses."""
    findings: list[LintFinding] = []

    for shorter in doc.lines:
        for longer in doc.lines:
            if shorter is longer or len(shorter.points) >= len(longer.points):
                continue
            if _is_subrun(shorter.points, longer.points):
                findings.append(
                    _finding(
                        "split-line",
                        f"{line_key(shorter)!r} is a segment of {line_key(longer)!r}",
                        shorter.pos,
                    )
                )
                break

    plane_sets = [(set(p.points), p) for p in doc.planes]
    for small_set, small in plane_sets:
        for big_set, big in plane_sets:
            if small is not big and small_set < big_set:
                findings.append(
                    _finding(
                        "non-maximal-plane",
                        f"{plane_key(small, CanonMode())!r} is a subset of "
                        f"{plane_key(big, CanonMode())!r}",
                        small.pos,
                    )
                )
                break

    perps = [c for c in doc.semantics if isinstance(c, Perp)]
    right = Expr("90", number=Fraction(90))
    for angle in doc.semantics:
        if not isinstance(angle, AngleMeasure) or angle.value != right:
            continue
        for perp in perps:
            if _duplicates_perp(doc, angle, perp):
                findings.append(
                    _finding(
                        "right-angle-duplication",
                        f"{clause_key(angle, CanonMode())!r} restates "
                        f"{clause_key(perp, CanonMode())!r}",
                        angle.pos,
                    )
                )
                break

    groups: dict[tuple, list[Perp]] = {}
    for perp in perps:
        ids = tuple(sorted((_arm_identity(doc, perp.seg1), _arm_identity(doc, perp.seg2))))
        foot = perp.foot.render() if perp.foot is not None else None
        groups.setdefault((ids, foot), []).append(perp)
    for (ids, _foot), members in sorted(groups.items()):
        keys = sorted({clause_key(p, CanonMode()) for p in members})
        if len(keys) > 1:
            findings.append(
                _finding(
                    "collinear-duplicate-perp",
                    "collapsible perpendicularity clauses on the same lines: " + ", ".join(keys),
                    members[0].pos,
                )
            )
    return findings


def _is_subrun(short, long) -> bool:
    for candidate in (tuple(long), tuple(reversed(long))):
        for start in range(len(candidate) - len(short) + 1):
            if candidate[start : start + len(short)] == tuple(short):
                return True
    return False


def _arm_points(doc: Document, seg) -> set[PointLabel]:
    points = set(seg)
    for line in doc.lines:
        if set(seg) <= set(line.points):
            points.update(line.points)
    return points


def _arm_identity(doc: Document, seg) -> str:
    covering = [line_key(l) for l in doc.lines if set(seg) <= set(l.points)]
    if covering:
        return min(covering)
    a, b = sorted(seg, key=PointLabel.sort_key)
    return f"seg {a.render()}{b.render()}"


def _duplicates_perp(doc: Document, angle: AngleMeasure, perp: Perp) -> bool:
    arm1 = _arm_points(doc, perp.seg1)
    arm2 = _arm_points(doc, perp.seg2)
    if perp.foot is not None:
        if perp.foot != angle.vertex:
            return False
    elif angle.vertex not in arm1 or angle.vertex not in arm2:
        return False
    return (angle.p1 in arm1 and angle.p3 in arm2) or (angle.p1 in arm2 and angle.p3 in arm1)
