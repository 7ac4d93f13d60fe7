"""Recursive-descent parsing of formal descriptions.

The parser is total: any input yields a Document plus per-statement
diagnostics, never an exception. Statements identify themselves by their
leading token, so misfiled statements still parse; section bookkeeping is
the format checker's concern.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lexer
from .ast import (
    HEADED,
    PLANE,
    SOLID_KIND_ALIASES,
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
    Solid,
)
from .expr import parse_expr
from .labels import POINT_RUN_RE, split_point_run
from .lexer import Token


@dataclass
class Diagnostic:
    line: int
    col: int
    message: str
    expected: str | None = None

    def __str__(self) -> str:
        text = f"{self.line}:{self.col}: {self.message}"
        if self.expected:
            text += f" (expected {self.expected})"
        return text


@dataclass
class Piece:
    """One scanned fragment: a tag event, a header, a statement, or a lex error."""

    kind: str  # "tag_open" | "tag_close" | "header" | "stmt" | "error"
    value: str = ""
    tokens: list[Token] = field(default_factory=list)
    line: int = 0
    col: int = 0
    diagnostic: Diagnostic | None = None


@dataclass
class ParseResult:
    document: Document
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def scan(text: str) -> list[Piece]:
    """Split text into tag events, headers and statement token groups."""
    pieces: list[Piece] = []
    for lineno, line_text in enumerate(text.splitlines(), start=1):
        try:
            tokens = lexer.tokenize_line(line_text, lineno)
        except lexer.IllegalCharacter as err:
            pieces.append(
                Piece(
                    "error",
                    line=err.line,
                    col=err.col,
                    diagnostic=Diagnostic(err.line, err.col, str(err)),
                )
            )
            continue
        if not tokens:
            continue
        if tokens[0].kind == lexer.HEADER:
            pieces.append(Piece("header", tokens[0].text, line=lineno, col=tokens[0].col))
            continue
        group: list[Token] = []

        def flush():
            if group:
                pieces.append(
                    Piece("stmt", tokens=list(group), line=group[0].line, col=group[0].col)
                )
                group.clear()

        for tok in tokens:
            if tok.kind in (lexer.TAG_OPEN, lexer.TAG_CLOSE):
                flush()
                pieces.append(Piece(tok.kind, tok.text, line=tok.line, col=tok.col))
            else:
                group.append(tok)
        flush()
    return pieces


def parse_document(text: str, domain: str = PLANE) -> ParseResult:
    """Parse text in either dialect into a Document plus diagnostics."""
    doc = Document(domain=domain)
    diagnostics: list[Diagnostic] = []
    dialect: str | None = None
    for piece in scan(text):
        if piece.kind == "error":
            diagnostics.append(piece.diagnostic)
        elif piece.kind in ("tag_open", "tag_close"):
            dialect = dialect or TAGGED
        elif piece.kind == "header":
            dialect = dialect or HEADED
        else:
            stype, nodes, stmt_diags = parse_statement(piece.tokens)
            if stmt_diags:
                diagnostics.extend(stmt_diags)
                continue
            _add_nodes(doc, stype, nodes)
    doc.dialect = dialect or TAGGED
    return ParseResult(doc, diagnostics)


def _add_nodes(doc: Document, stype: str, nodes) -> None:
    if stype == "point":
        doc.points.update(nodes)
    elif stype == "line":
        doc.lines.extend(nodes)
    elif stype == "circle":
        doc.circles.extend(nodes)
    elif stype == "plane":
        doc.planes.extend(nodes)
    elif stype == "solid":
        doc.solids.extend(nodes)
    elif stype == "semantic":
        doc.semantics.extend(nodes)


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, ahead: int = 0) -> Token | None:
        j = self.i + ahead
        return self.tokens[j] if j < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind and (text is None or tok.text == text)

    def take(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.advance()
        return None

    def exhausted(self) -> bool:
        return self.i >= len(self.tokens)


def parse_statement(tokens: list[Token]):
    """Parse one statement. Returns (type, nodes, diagnostics)."""
    cur = _Cursor(tokens)
    head = tokens[0]
    pos = (head.line, head.col)

    def fail(message: str, expected: str | None = None, tok: Token | None = None):
        at = tok or cur.peek() or tokens[-1]
        return head.text, [], [Diagnostic(at.line, at.col, message, expected)]

    try:
        if head.kind == lexer.NONE_MARK and len(tokens) == 1:
            return "none", [], []
        if head.kind == lexer.KW and head.text == "point":
            cur.advance()
            run = cur.take(lexer.POINTRUN)
            if run is None:
                return fail("point declaration needs a label", "one point label")
            labels = split_point_run(run.text)
            if len(labels) != 1:
                return fail("point declares exactly one label", "one point label", run)
            if not cur.exhausted():
                return fail("unexpected trailing input after point declaration")
            return "point", labels, []
        if head.kind == lexer.LBRACKET:
            return _parse_point_list(cur, fail)
        if head.kind == lexer.KW and head.text == "line":
            return _parse_line(cur, fail, pos)
        if head.kind == lexer.CMD and head.text == "odot":
            return _parse_circle(cur, fail, pos)
        if head.kind == lexer.KW and head.text == "plane":
            cur.advance()
            labels = _collect_labels(cur)
            if len(labels) < 3:
                return fail("plane needs at least 3 points", "3 or more labels")
            if len(set(labels)) != len(labels):
                return fail("plane repeats a point")
            if not cur.exhausted():
                return fail("unexpected trailing input after plane statement")
            return "plane", [Plane(tuple(labels), pos=pos)], []
        if head.kind == lexer.KW and head.text == "solid":
            cur.advance()
            kind_tok = cur.take(lexer.KIND)
            if kind_tok is None:
                return fail("solid statement needs a category", "one of the solid kinds")
            return _parse_solid(cur, fail, kind_tok, pos)
        if head.kind == lexer.KIND:
            # bare template form, e.g. "Pyramid P-ABC" under a Structure header
            cur.advance()
            return _parse_solid(cur, fail, head, pos)
        if head.kind == lexer.KW and head.text == "m":
            return _parse_measure(cur, fail, pos)
        if head.kind == lexer.POINTRUN:
            return _parse_relation(cur, fail, pos)
    except ValueError as err:
        return fail(str(err))
    return fail(f"statement cannot start with {head.text!r}", "a statement keyword", head)


def _collect_labels(cur: _Cursor):
    labels = []
    while cur.at(lexer.POINTRUN):
        labels.extend(split_point_run(cur.advance().text))
    return labels


def _parse_point_list(cur: _Cursor, fail):
    cur.advance()
    labels = []
    while True:
        if cur.take(lexer.RBRACKET):
            break
        if cur.take(lexer.COMMA):
            continue
        if cur.at(lexer.POINTRUN):
            labels.extend(split_point_run(cur.advance().text))
            continue
        return fail("unterminated point list", "label, comma or ]")
    if not cur.exhausted():
        return fail("unexpected trailing input after point list")
    return "point", labels, []


def _parse_line(cur: _Cursor, fail, pos):
    cur.advance()
    name = None
    nxt, after = cur.peek(), cur.peek(1)
    if (
        nxt is not None
        and after is not None
        and nxt.kind in (lexer.NAME, lexer.KW)
        and after.kind == lexer.KW
        and after.text == "lineson"
    ):
        name = cur.advance().text
        cur.advance()
    labels = _collect_labels(cur)
    if len(labels) < 2:
        return fail("line needs at least 2 points", "2 or more labels")
    if len(set(labels)) != len(labels):
        return fail("line repeats a point")
    if not cur.exhausted():
        return fail("unexpected trailing input after line statement")
    return "line", [Line(tuple(labels), name=name, pos=pos)], []


def _parse_circle(cur: _Cursor, fail, pos):
    cur.advance()
    center_tok = cur.take(lexer.POINTRUN)
    if center_tok is None:
        return fail("circle needs a center label", "one point label")
    center_labels = split_point_run(center_tok.text)
    if len(center_labels) != 1:
        return fail("circle center is a single label", "one point label", center_tok)
    if cur.take(lexer.KW, "lieson") is None:
        return fail("circle rim is introduced by 'lieson'", "lieson")
    on_points = _collect_labels(cur)
    if not cur.exhausted():
        return fail("unexpected trailing input after circle statement")
    return "circle", [Circle(center_labels[0], frozenset(on_points), pos=pos)], []


def _parse_solid(cur: _Cursor, fail, kind_tok: Token, pos):
    kind = SOLID_KIND_ALIASES.get(kind_tok.text, kind_tok.text)
    groups = []
    while True:
        labels = _collect_labels(cur)
        if not labels:
            return fail("solid needs a vertex group", "point labels")
        groups.append(tuple(labels))
        if cur.take(lexer.MINUS):
            continue
        break
    if not cur.exhausted():
        return fail("unexpected trailing input after solid statement")
    return "solid", [Solid(kind, tuple(groups), pos=pos)], []


def _parse_measure(cur: _Cursor, fail, pos):
    cur.advance()
    cmd = cur.take(lexer.CMD, "angle") or cur.take(lexer.CMD, "widehat")
    if cmd is None:
        return fail("measure statement needs \\angle or \\widehat", "\\angle or \\widehat")
    labels = _collect_labels(cur)
    want = 3 if cmd.text == "angle" else 2
    if len(labels) != want:
        return fail(f"\\{cmd.text} names exactly {want} points", f"{want} labels")
    if cur.take(lexer.EQ) is None:
        return fail("measure statement needs a value", "=")
    tail = cur.take(lexer.EXPR_TAIL)
    if tail is None or not tail.text:
        return fail("measure statement needs a value", "an expression")
    if not cur.exhausted():
        return fail("unexpected trailing input after measure")
    value = parse_expr(tail.text)
    if cmd.text == "angle":
        return "semantic", [AngleMeasure(labels[0], labels[1], labels[2], value, pos=pos)], []
    return "semantic", [ArcMeasure(labels[0], labels[1], value, pos=pos)], []


def _parse_relation(cur: _Cursor, fail, pos):
    run = cur.advance()
    labels = split_point_run(run.text)
    if len(labels) != 2:
        return fail("a segment names exactly two points", "a two-letter run", run)
    seg = (labels[0], labels[1])
    if cur.take(lexer.EQ) is not None:
        tail = cur.take(lexer.EXPR_TAIL)
        if tail is None or not tail.text:
            return fail("equation needs a right-hand side", "expression or segment")
        if not cur.exhausted():
            return fail("unexpected trailing input after equation")
        stripped = tail.text.strip()
        if POINT_RUN_RE.fullmatch(stripped):
            rhs_labels = split_point_run(stripped)
            if len(rhs_labels) == 2:
                return "semantic", [SegmentEq(seg, (rhs_labels[0], rhs_labels[1]), pos=pos)], []
        return "semantic", [SegmentEq(seg, parse_expr(tail.text), pos=pos)], []
    if cur.at(lexer.CMD, "perp"):
        cur.advance()
        cur.take(lexer.KW, "to")
        other = _take_segment(cur)
        if other is None:
            return fail("perpendicularity needs a second segment", "a two-letter run")
        foot = None
        if cur.take(lexer.KW, "on") is not None:
            foot_tok = cur.take(lexer.POINTRUN)
            foot_labels = split_point_run(foot_tok.text) if foot_tok else []
            if len(foot_labels) != 1:
                return fail("perpendicular foot is a single label", "one point label")
            foot = foot_labels[0]
        if not cur.exhausted():
            return fail("unexpected trailing input after perpendicularity")
        return "semantic", [Perp(seg, other, foot, pos=pos)], []
    if cur.at(lexer.CMD, "parallel"):
        cur.advance()
        other = _take_segment(cur)
        if other is None:
            return fail("parallelism needs a second segment", "a two-letter run")
        if not cur.exhausted():
            return fail("unexpected trailing input after parallelism")
        return "semantic", [Parallel(seg, other, pos=pos)], []
    return fail("segment must be followed by =, \\perp or \\parallel", "=, \\perp, \\parallel")


def _take_segment(cur: _Cursor):
    tok = cur.take(lexer.POINTRUN)
    if tok is None:
        return None
    labels = split_point_run(tok.text)
    if len(labels) != 2:
        return None
    return (labels[0], labels[1])
