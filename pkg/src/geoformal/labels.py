"""Point labels and the greedy splitter for concatenated label runs."""

from __future__ import annotations

import re
from dataclasses import dataclass


class MalformedPointRun(ValueError):
    """A run of concatenated point labels could not be segmented."""

    def __init__(self, run: str, index: int):
        super().__init__(f"cannot split point run {run!r} at index {index}")
        self.run = run
        self.index = index


# One label: uppercase base, primes, optional (possibly braced) digit subscript.
_LABEL_PART = r"[A-Z]'*(?:_\{?[0-9]+\}?)?"
_LABEL_RE = re.compile(r"([A-Z])('*)(?:_(\{?)([0-9]+)(\}?))?")
LABEL_RE = re.compile(_LABEL_PART)
POINT_RUN_RE = re.compile(f"(?:{_LABEL_PART})+")


@dataclass(frozen=True)
class PointLabel:
    """A vertex name: base letter, prime marks, optional digit subscript."""

    base: str
    primes: int = 0
    subscript: str | None = None

    def __post_init__(self):
        if len(self.base) != 1 or not self.base.isupper() or not self.base.isalpha():
            raise ValueError(f"label base must be a single uppercase letter, got {self.base!r}")
        if self.primes < 0:
            raise ValueError("prime count must be nonnegative")
        if self.subscript is not None and not (self.subscript and self.subscript.isdigit()):
            raise ValueError(f"subscript must be a nonempty digit string, got {self.subscript!r}")

    def render(self) -> str:
        text = self.base + "'" * self.primes
        if self.subscript is not None:
            text += "_{%s}" % self.subscript
        return text

    def sort_key(self) -> tuple[str, int, str]:
        return (self.base, self.primes, self.subscript or "")

    def __lt__(self, other: "PointLabel") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.render()


def parse_label(text: str) -> PointLabel:
    """Parse a single label rendering; rejects trailing residue."""
    labels = split_point_run(text)
    if len(labels) != 1:
        raise MalformedPointRun(text, 0)
    return labels[0]


def split_point_run(run: str) -> list[PointLabel]:
    """Split a concatenation of label renderings, greedily left to right.

    Subscript braces may be omitted (``A_1`` equals ``A_{1}``) but must be
    balanced when present. Raises MalformedPointRun if any residue cannot
    start a new label.
    """
    labels: list[PointLabel] = []
    i = 0
    while i < len(run):
        m = _LABEL_RE.match(run, i)
        if m is None:
            raise MalformedPointRun(run, i)
        base, primes, open_brace, digits, close_brace = m.groups()
        if digits is not None and bool(open_brace) != bool(close_brace):
            raise MalformedPointRun(run, i)
        labels.append(PointLabel(base, len(primes), digits))
        i = m.end()
    return labels
