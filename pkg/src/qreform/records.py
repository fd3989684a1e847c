"""Question records and newline-delimited JSON corpus IO.

Corpus files are UTF-8, one JSON object per line:
{"id": str, "text": str, "answered": true|false|null}
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from .errors import EmptyInput
from .qtypes import QuestionType


@dataclass
class QuestionRecord:
    """One user question with optional answered flag and assigned type."""

    id: str
    text: str
    answered: Optional[bool] = None
    qtype: Optional[QuestionType] = None

    @classmethod
    def from_dict(cls, row: Mapping[str, Any]) -> "QuestionRecord":
        text = row.get("text")
        if not isinstance(text, str) or not text.strip():
            raise ValueError("record needs a non-empty 'text' field")
        rid = row.get("id")
        if not isinstance(rid, str) or not rid:
            raise ValueError("record needs a non-empty 'id' field")
        answered = row.get("answered")
        if answered is not None and not isinstance(answered, bool):
            raise ValueError("'answered' must be true, false, or null")
        qtype = row.get("qtype")
        return cls(
            id=rid,
            text=text,
            answered=answered,
            qtype=QuestionType(qtype) if qtype is not None else None,
        )

    def to_dict(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"id": self.id, "text": self.text, "answered": self.answered}
        if self.qtype is not None:
            row["qtype"] = self.qtype.value
        return row


def iter_ndjson(path: str | Path) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """Yield (line_number, parsed object) for each non-blank line."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            yield lineno, json.loads(line)


def read_question_records(path: str | Path) -> Tuple[List[QuestionRecord], int]:
    """Load a question corpus, returning (records, parse_error_count).

    Lines that are not JSON objects or lack id/text are counted and skipped;
    an entirely unusable file raises EmptyInput.
    """
    records: List[QuestionRecord] = []
    errors = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                records.append(QuestionRecord.from_dict(row))
            except (json.JSONDecodeError, ValueError, TypeError):
                errors += 1
    if not records:
        raise EmptyInput(f"no usable records in {path}")
    return records, errors


def write_ndjson(path: str | Path, rows: Iterable[Mapping[str, Any]]) -> int:
    """Write rows as one JSON object per line; returns the row count."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False))
            fh.write("\n")
            count += 1
    return count
