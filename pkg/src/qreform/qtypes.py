"""Closed label enumerations: question types and reformulation operators."""
from __future__ import annotations

from enum import Enum


class QuestionType(str, Enum):
    """Syntactic question type; every question gets exactly one."""

    ROOT = "root"
    POLAR = "polar"
    OPEN = "open"
    REQUEST = "request"
    OTHER = "other"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class Operator(str, Enum):
    """Reformulation operator; pipelines are ordered lists of these."""

    REP = "REP"
    ROO = "ROO"
    GEN = "GEN"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value
