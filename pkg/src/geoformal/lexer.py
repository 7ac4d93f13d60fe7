"""Line-oriented lexer for the formal language.

Statements live one per line; section boundaries are literal tags
(``<points>`` ... ``</points>``) or prompt-style headers (``**Points:**``).
Everything after a top-level ``=`` is captured verbatim as one expression
tail token, so measurement values never fight the statement alphabet.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import SOLID_KINDS, SOLID_KIND_ALIASES
from .labels import POINT_RUN_RE

KW = "kw"
CMD = "cmd"
POINTRUN = "pointrun"
NAME = "name"
KIND = "kind"
NUMBER = "number"
EQ = "eq"
MINUS = "minus"
LBRACKET = "lbracket"
RBRACKET = "rbracket"
COMMA = "comma"
PUNCT = "punct"
EXPR_TAIL = "exprtail"
TAG_OPEN = "tag_open"
TAG_CLOSE = "tag_close"
HEADER = "header"
NONE_MARK = "none"
WORD = "word"

KEYWORDS = frozenset({"point", "line", "lineson", "lieson", "plane", "solid", "m", "on", "to"})
COMMANDS = frozenset({"odot", "angle", "perp", "parallel", "widehat"})

_TAG_RE = re.compile(r"<(/?)([A-Za-z]+)>")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9'_{}]*")
_NUMBER_RE = re.compile(r"[0-9]+(?:\.[0-9]+)?")
_CMD_RE = re.compile(r"\\([A-Za-z]+)")
_HEADER_RE = re.compile(
    r"^\s*(?:\*\*)?\s*(points|lines|circles|planes|solids|structure|semantics|semantic clauses)"
    r"\s*:?\s*(?:\*\*)?\s*:?\s*$",
    re.IGNORECASE,
)
# Header names used by the sectioned prompt templates, mapped to tag names.
HEADER_SECTIONS = {
    "points": "points",
    "lines": "lines",
    "circles": "circles",
    "planes": "planes",
    "solids": "solids",
    "structure": "solids",
    "semantics": "semantics",
    "semantic clauses": "semantics",
}

_SKIP_CHARS = " \t\r$"
_PUNCT_CHARS = "().+/^*:"


class IllegalCharacter(ValueError):
    """A byte outside the lexical alphabet."""

    def __init__(self, char: str, line: int, col: int):
        super().__init__(f"illegal character {char!r} at {line}:{col}")
        self.char = char
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def match_header(line_text: str) -> str | None:
    """Section name if the whole line is a prompt-style header, else None."""
    m = _HEADER_RE.match(line_text)
    if m is None:
        return None
    return HEADER_SECTIONS[m.group(1).lower()]


def tokenize_line(text: str, lineno: int = 1) -> list[Token]:
    """Tokenize one physical line. Raises IllegalCharacter."""
    header = match_header(text)
    if header is not None:
        return [Token(HEADER, header, lineno, 1)]

    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _SKIP_CHARS:
            i += 1
            continue
        col = i + 1
        if ch == "<":
            m = _TAG_RE.match(text, i)
            if m is None:
                raise IllegalCharacter(ch, lineno, col)
            kind = TAG_CLOSE if m.group(1) else TAG_OPEN
            tokens.append(Token(kind, m.group(2).lower(), lineno, col))
            i = m.end()
            continue
        if ch == "\\":
            m = _CMD_RE.match(text, i)
            if m is None:
                raise IllegalCharacter(ch, lineno, col)
            tokens.append(Token(CMD, m.group(1), lineno, col))
            i = m.end()
            continue
        if ch == "=":
            tokens.append(Token(EQ, "=", lineno, col))
            tail = text[i + 1 :].strip(_SKIP_CHARS)
            tokens.append(Token(EXPR_TAIL, tail, lineno, i + 2))
            return tokens
        if ch == "-":
            tokens.append(Token(MINUS, "-", lineno, col))
            i += 1
            continue
        if ch == "[":
            tokens.append(Token(LBRACKET, "[", lineno, col))
            i += 1
            continue
        if ch == "]":
            tokens.append(Token(RBRACKET, "]", lineno, col))
            i += 1
            continue
        if ch == ",":
            tokens.append(Token(COMMA, ",", lineno, col))
            i += 1
            continue
        if ch in _PUNCT_CHARS:
            tokens.append(Token(PUNCT, ch, lineno, col))
            i += 1
            continue
        if ch.isascii() and ch.isdigit():
            m = _NUMBER_RE.match(text, i)
            tokens.append(Token(NUMBER, m.group(), lineno, col))
            i = m.end()
            continue
        if ch.isascii() and ch.isalpha():
            m = _WORD_RE.match(text, i)
            word = m.group()
            tokens.append(Token(_classify_word(word), word, lineno, col))
            i = m.end()
            continue
        raise IllegalCharacter(ch, lineno, col)
    return tokens


def _classify_word(word: str) -> str:
    if word in KEYWORDS:
        return KW
    if word in SOLID_KINDS or word in SOLID_KIND_ALIASES:
        return KIND
    if word.lower() == "none":
        return NONE_MARK
    if POINT_RUN_RE.fullmatch(word):
        return POINTRUN
    if re.fullmatch(r"[a-z][a-z0-9]*", word):
        return NAME
    return WORD


def tokenize(text: str) -> list[Token]:
    """Tokenize a whole document; every token carries (line, col)."""
    tokens: list[Token] = []
    for lineno, line_text in enumerate(text.splitlines(), start=1):
        tokens.extend(tokenize_line(line_text, lineno))
    return tokens
