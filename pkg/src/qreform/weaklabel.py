"""Weak-supervision derivation of operator-labeled reformulation pairs.

A corpus of (ill-formed, well-formed) question pairs becomes training
atoms by classifying both sides:

- same type on both sides            -> REP
- root target with a non-root source -> ROO
- anything else                      -> dropped (counted, never relabeled)

GEN pairs cannot be derived automatically and only enter through
annotated data. This module also prepares fine-tuning data (stable
shuffle split, GEN upsampling) and implements the diversity-driven
annotation sampler.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import EmptyInput
from .qtypes import Operator, QuestionType
from .records import QuestionRecord
from .textkit import tokenize
from .typology import DEFAULT_CONFIG, KeywordConfig, classify

ORIGIN_WEAK = "weak"
ORIGIN_ANNOTATED = "annotated"
_ORIGINS = (ORIGIN_WEAK, ORIGIN_ANNOTATED)


@dataclass(frozen=True)
class ReformulationPair:
    """One (source question, target question) training atom."""

    source: str
    target: str
    operator: Operator
    source_type: QuestionType
    target_type: QuestionType
    origin: str = ORIGIN_WEAK

    def __post_init__(self) -> None:
        if not self.source.strip() or not self.target.strip():
            raise ValueError("source and target must be non-empty")
        if self.origin not in _ORIGINS:
            raise ValueError(f"origin must be one of {_ORIGINS}")
        if self.operator is Operator.REP and self.source_type != self.target_type:
            raise ValueError("REP pairs must keep the question type")
        if self.operator is Operator.ROO:
            if self.target_type is not QuestionType.ROOT:
                raise ValueError("ROO pairs must have a root target")
            if self.source_type is QuestionType.ROOT:
                raise ValueError("ROO pairs must have a non-root source")

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "target": self.target,
            "operator": self.operator.value,
            "source_type": self.source_type.value,
            "target_type": self.target_type.value,
            "origin": self.origin,
        }

    @classmethod
    def from_json_dict(cls, row: Dict[str, Any]) -> "ReformulationPair":
        return cls(
            source=row["source"],
            target=row["target"],
            operator=Operator(row["operator"]),
            source_type=QuestionType(row["source_type"]),
            target_type=QuestionType(row["target_type"]),
            origin=row.get("origin", ORIGIN_WEAK),
        )


def _empty_counts() -> Dict[QuestionType, Dict[Operator, int]]:
    return {
        qt: {Operator.REP: 0, Operator.ROO: 0} for qt in QuestionType
    }


@dataclass
class DerivationReport:
    """Source-type x operator counts for one derivation run."""

    counts: Dict[QuestionType, Dict[Operator, int]] = field(default_factory=_empty_counts)
    dropped: int = 0
    consumed: int = 0

    @property
    def totals(self) -> Dict[Operator, int]:
        totals = {Operator.REP: 0, Operator.ROO: 0}
        for per_op in self.counts.values():
            for op, n in per_op.items():
                totals[op] += n
        return totals

    @property
    def emitted(self) -> int:
        return sum(self.totals.values())

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "counts": {
                qt.value: {op.value: n for op, n in self.counts[qt].items()}
                for qt in QuestionType
            },
            "totals": {op.value: n for op, n in self.totals.items()},
            "dropped": self.dropped,
            "consumed": self.consumed,
        }


def derive_pretrain_pairs(
    pairs: Iterable[Tuple[str, str]],
    config: KeywordConfig = DEFAULT_CONFIG,
) -> Tuple[Iterator[ReformulationPair], DerivationReport]:
    """Stream operator-labeled pairs from (source, target) question pairs.

    Returns a lazy iterator plus its report; the report is complete once
    the iterator is exhausted. Pairs that fail to tokenize on either side
    count as dropped, so emitted + dropped == consumed always holds.
    """
    report = DerivationReport()

    def generate() -> Iterator[ReformulationPair]:
        for source, target in pairs:
            report.consumed += 1
            try:
                source_type = classify(tokenize(source), config)
                target_type = classify(tokenize(target), config)
            except EmptyInput:
                report.dropped += 1
                continue
            if source_type == target_type:
                operator = Operator.REP
            elif target_type is QuestionType.ROOT:
                operator = Operator.ROO
            else:
                report.dropped += 1
                continue
            report.counts[source_type][operator] += 1
            yield ReformulationPair(
                source=source,
                target=target,
                operator=operator,
                source_type=source_type,
                target_type=target_type,
                origin=ORIGIN_WEAK,
            )

    return generate(), report


@dataclass
class TsvStats:
    """Line accounting for a tab-separated pair file."""

    lines: int = 0
    malformed: int = 0


def iter_tsv_pairs(path: str | Path, stats: Optional[TsvStats] = None) -> Iterator[Tuple[str, str]]:
    """Yield (ill-formed, well-formed) pairs from a two-column TSV.

    Lines without two non-empty columns are counted as malformed and
    skipped; extra columns are ignored.
    """
    own_stats = stats if stats is not None else TsvStats()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            own_stats.lines += 1
            cols = line.split("\t")
            if len(cols) < 2 or not cols[0].strip() or not cols[1].strip():
                own_stats.malformed += 1
                continue
            yield cols[0].strip(), cols[1].strip()


def upsample_gen(pairs: Sequence[ReformulationPair], factor: int = 5) -> List[ReformulationPair]:
    """Duplicate every GEN pair to exactly `factor` adjacent copies."""
    if factor < 1:
        raise ValueError("factor must be a positive integer")
    out: List[ReformulationPair] = []
    for pair in pairs:
        if pair.operator is Operator.GEN:
            out.extend([pair] * factor)
        else:
            out.append(pair)
    return out


def _bigrams(tokens: Sequence[str]) -> Set[Tuple[str, str]]:
    return {(tokens[i], tokens[i + 1]) for i in range(len(tokens) - 1)}


def sample_for_annotation(
    corpus: Iterable[QuestionRecord],
    budget: int,
    min_len: int = 5,
    max_len: int = 13,
) -> List[QuestionRecord]:
    """Pick up to `budget` diverse questions for manual annotation.

    Questions outside the [min_len, max_len] token window are filtered
    out. The rest are scanned in input order, selecting a question iff it
    contributes at least one token bigram unseen among the selections so
    far. If the budget is still unmet, leftovers fill the gap ranked by
    unseen-bigram count (ties broken by input order).
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    eligible: List[Tuple[QuestionRecord, Set[Tuple[str, str]]]] = []
    for record in corpus:
        try:
            tokens = tokenize(record.text)
        except EmptyInput:
            continue
        if min_len <= len(tokens) <= max_len:
            eligible.append((record, _bigrams(tokens)))
    if not eligible:
        raise EmptyInput("no questions inside the token-length window")

    selected: List[QuestionRecord] = []
    skipped: List[Tuple[int, QuestionRecord, Set[Tuple[str, str]]]] = []
    seen: Set[Tuple[str, str]] = set()
    for position, (record, grams) in enumerate(eligible):
        if len(selected) >= budget:
            break
        if grams - seen:
            selected.append(record)
            seen |= grams
        else:
            skipped.append((position, record, grams))

    if len(selected) < budget:
        need = budget - len(selected)
        ranked = sorted(skipped, key=lambda item: (-len(item[2] - seen), item[0]))
        selected.extend(record for _, record, _ in ranked[:need])
    return selected


def split_finetune(
    pairs: Sequence[ReformulationPair],
    seed: int,
    val_fraction: float = 0.1,
) -> Tuple[List[ReformulationPair], List[ReformulationPair]]:
    """Stable shuffled (train, validation) split; validation is the tail."""
    if not 0 <= val_fraction < 1:
        raise ValueError("val_fraction must be in [0, 1)")
    order = list(range(len(pairs)))
    random.Random(seed).shuffle(order)
    shuffled = [pairs[i] for i in order]
    n_val = int(len(pairs) * val_fraction)
    if n_val == 0:
        return shuffled, []
    return shuffled[:-n_val], shuffled[-n_val:]
