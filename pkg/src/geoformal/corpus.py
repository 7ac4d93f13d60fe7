"""JSONL corpus records: one (prediction, reference, domain) pair per line."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .ast import DOMAINS


class CorpusFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    prediction: str
    reference: str
    domain: str


def record_from_dict(data: dict, lineno: int = 0) -> CorpusRecord:
    if not isinstance(data, dict):
        raise CorpusFormatError(lineno, "record must be a JSON object")
    missing = [key for key in ("id", "prediction", "reference", "domain") if key not in data]
    if missing:
        raise CorpusFormatError(lineno, f"missing fields: {', '.join(missing)}")
    for key in ("id", "prediction", "reference", "domain"):
        if not isinstance(data[key], str):
            raise CorpusFormatError(lineno, f"field {key!r} must be a string")
    if data["domain"] not in DOMAINS:
        raise CorpusFormatError(lineno, f"domain must be one of {DOMAINS}, got {data['domain']!r}")
    return CorpusRecord(data["id"], data["prediction"], data["reference"], data["domain"])


def load_jsonl(path: str) -> list[CorpusRecord]:
    """Load and validate a corpus file; ids must be unique."""
    records: list[CorpusRecord] = []
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                data = json.loads(raw)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(lineno, f"invalid JSON: {err.msg}") from err
            record = record_from_dict(data, lineno)
            if record.id in seen_ids:
                raise CorpusFormatError(lineno, f"duplicate id {record.id!r}")
            seen_ids.add(record.id)
            records.append(record)
    return records
