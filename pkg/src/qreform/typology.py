"""Five-way syntactic question typing via an ordered keyword cascade.

The cascade is evaluated top to bottom and stops at the first match:

1. root    - first token is a wh-word, or the first two tokens form one of
             the measured how-* bigrams ("how many", "how long", ...)
2. polar   - first token is a yes/no auxiliary ("do", "is", "can", ...)
3. open    - first token is "how" (and no bigram matched above)
4. request - first token is an imperative verb
5. other   - anything else
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .errors import EmptyInput
from .qtypes import QuestionType
from .textkit import tokenize

DEFAULT_WH_UNIGRAMS = frozenset({"what", "where", "when", "which", "who", "why"})

DEFAULT_HOW_BIGRAMS = frozenset({
    "how much", "how many", "how long", "how old", "how early", "how soon",
    "how wealthy", "how rich", "how big", "how small", "how tall", "how short",
    "how heavy", "how often", "how late", "how far", "how high", "how fast",
    "how quickly", "how close",
})

DEFAULT_POLAR_KEYWORDS = frozenset({
    "do", "does", "did", "can", "was", "were", "should", "is", "isn",
    "has", "have", "are", "aren", "will",
})

# Imperative verbs observed at the start of assistant-style requests.
# Deliberately a closed lexicon rather than a statistical POS tagger, so
# classification stays deterministic and dependency-free. Gerund forms are
# matched by the -ing rule in is_verb_initial, gated on a base-form hit.
DEFAULT_VERB_LEXICON = frozenset({
    "add", "book", "buy", "calculate", "call", "cancel", "check", "clean",
    "close", "compare", "compute", "convert", "cook", "create", "define",
    "delete", "describe", "explain", "find", "fix", "get", "give", "help",
    "identify", "install", "list", "locate", "look", "make", "name", "open",
    "order", "pause", "play", "pronounce", "read", "recommend", "remind",
    "remove", "repeat", "replace", "resume", "say", "schedule", "search",
    "set", "show", "shuffle", "sing", "skip", "spell", "start", "stop",
    "suggest", "tell", "text", "translate", "tune", "turn", "unscrew",
    "wake", "write",
})


@dataclass(frozen=True)
class KeywordConfig:
    """Keyword sets driving the classification cascade."""

    wh_unigrams: FrozenSet[str] = DEFAULT_WH_UNIGRAMS
    how_bigrams: FrozenSet[str] = DEFAULT_HOW_BIGRAMS
    polar_keywords: FrozenSet[str] = DEFAULT_POLAR_KEYWORDS
    verb_lexicon: FrozenSet[str] = DEFAULT_VERB_LEXICON

    def __post_init__(self) -> None:
        for name in ("wh_unigrams", "how_bigrams", "polar_keywords", "verb_lexicon"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")

    def to_json_dict(self) -> Dict[str, List[str]]:
        return {
            "wh_unigrams": sorted(self.wh_unigrams),
            "how_bigrams": sorted(self.how_bigrams),
            "polar_keywords": sorted(self.polar_keywords),
            "verb_lexicon": sorted(self.verb_lexicon),
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Iterable[str]]) -> "KeywordConfig":
        return cls(
            wh_unigrams=frozenset(data["wh_unigrams"]),
            how_bigrams=frozenset(data["how_bigrams"]),
            polar_keywords=frozenset(data["polar_keywords"]),
            verb_lexicon=frozenset(data["verb_lexicon"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "KeywordConfig":
        return cls.from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))


DEFAULT_CONFIG = KeywordConfig()


def is_verb_initial(tokens: Sequence[str], config: KeywordConfig = DEFAULT_CONFIG) -> bool:
    """True iff the first token reads as an imperative verb."""
    if not tokens:
        return False
    first = tokens[0]
    if first in config.verb_lexicon:
        return True
    # Gerund starts ("unscrewing sliding window lock") count when the stem
    # is a known base verb.
    if first.endswith("ing") and len(first) > 5:
        stem = first[:-3]
        return stem in config.verb_lexicon or stem + "e" in config.verb_lexicon
    return False


def classify(tokens: Sequence[str], config: KeywordConfig = DEFAULT_CONFIG) -> QuestionType:
    """Assign exactly one QuestionType to a non-empty token sequence."""
    if not tokens:
        raise EmptyInput("cannot classify an empty token sequence")
    first = tokens[0]
    if first in config.wh_unigrams:
        return QuestionType.ROOT
    if len(tokens) >= 2 and f"{first} {tokens[1]}" in config.how_bigrams:
        return QuestionType.ROOT
    if first in config.polar_keywords:
        return QuestionType.POLAR
    if first == "how":
        return QuestionType.OPEN
    if is_verb_initial(tokens, config):
        return QuestionType.REQUEST
    return QuestionType.OTHER


def classify_text(text: str, config: KeywordConfig = DEFAULT_CONFIG) -> QuestionType:
    return classify(tokenize(text), config)


@dataclass(frozen=True)
class AccuracyReport:
    """Per-type and overall classification accuracy against gold labels."""

    per_type: Dict[QuestionType, float]
    support: Dict[QuestionType, int]
    correct: int
    total: int

    @property
    def average(self) -> float:
        return self.correct / self.total

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "per_type": {
                qt.value: self.per_type[qt] for qt in QuestionType if qt in self.per_type
            },
            "support": {
                qt.value: self.support[qt] for qt in QuestionType if qt in self.support
            },
            "average": self.average,
            "total": self.total,
        }


def evaluate_classifier(
    labeled: Sequence[Tuple[str, QuestionType]],
    config: KeywordConfig = DEFAULT_CONFIG,
) -> AccuracyReport:
    """Score the cascade on (text, gold type) pairs, grouped by gold type."""
    if not labeled:
        raise EmptyInput("need at least one labeled example")
    hits: Dict[QuestionType, int] = {}
    support: Dict[QuestionType, int] = {}
    correct = 0
    for text, gold in labeled:
        predicted = classify_text(text, config)
        support[gold] = support.get(gold, 0) + 1
        if predicted == gold:
            hits[gold] = hits.get(gold, 0) + 1
            correct += 1
    per_type = {qt: hits.get(qt, 0) / n for qt, n in support.items()}
    return AccuracyReport(
        per_type=per_type, support=support, correct=correct, total=len(labeled)
    )
