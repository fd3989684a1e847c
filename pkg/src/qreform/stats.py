"""Corpus analytics: answered/unanswered correlations, type-distribution
diffs, answer rates, 2x2 operator contingency tables, and reformulation
delta reports."""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    ConstantSeries,
    EmptyInput,
    InsufficientData,
    LengthMismatch,
)
from .qtypes import QuestionType
from .records import QuestionRecord
from .textkit import (
    FEATURE_NAMES,
    IdfModel,
    compute_features,
    tokenize,
    type_token_ratio,
)
from .typology import DEFAULT_CONFIG, KeywordConfig, classify


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation coefficient, clamped into [-1, 1]."""
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise InsufficientData("correlation needs at least 3 paired samples")
    if min(x) == max(x) or min(y) == max(y):
        raise ConstantSeries("correlation is undefined for a constant series")
    r = statistics.correlation(list(x), list(y))
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class CorrelationReport:
    """Pearson r of each lexical feature against the answered flag."""

    correlations: Dict[str, float]
    n: int

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "correlations": {name: self.correlations[name] for name in FEATURE_NAMES},
        }


def correlation_report(
    records: Iterable[QuestionRecord],
    idf: IdfModel,
) -> CorrelationReport:
    """Correlate all seven features with the binary answered flag.

    Records without an answered flag, or that fail to tokenize, are
    skipped. Raises InsufficientData unless both classes are present.
    """
    series: Dict[str, List[float]] = {name: [] for name in FEATURE_NAMES}
    flags: List[float] = []
    for record in records:
        if record.answered is None:
            continue
        try:
            features = compute_features(record.text, idf)
        except EmptyInput:
            continue
        for name in FEATURE_NAMES:
            series[name].append(float(getattr(features, name)))
        flags.append(1.0 if record.answered else 0.0)
    if not flags or min(flags) == max(flags):
        raise InsufficientData("need both answered and unanswered records")
    correlations = {name: pearson(series[name], flags) for name in FEATURE_NAMES}
    return CorrelationReport(correlations=correlations, n=len(flags))


@dataclass(frozen=True)
class TypeDistributionDiff:
    """Percentage-point type share differences (unanswered - answered)."""

    diffs: Dict[QuestionType, float]
    n_answered: int
    n_unanswered: int

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "diffs_pp": {qt.value: self.diffs[qt] for qt in QuestionType},
            "n_answered": self.n_answered,
            "n_unanswered": self.n_unanswered,
        }


def _type_shares(texts: Iterable[str], config: KeywordConfig) -> Tuple[Dict[QuestionType, float], int]:
    counts = {qt: 0 for qt in QuestionType}
    total = 0
    for text in texts:
        try:
            qtype = classify(tokenize(text), config)
        except EmptyInput:
            continue
        counts[qtype] += 1
        total += 1
    if total == 0:
        raise EmptyInput("no classifiable questions in corpus")
    return {qt: 100.0 * counts[qt] / total for qt in QuestionType}, total


def type_distribution_diff(
    answered: Iterable[str],
    unanswered: Iterable[str],
    config: KeywordConfig = DEFAULT_CONFIG,
) -> TypeDistributionDiff:
    """Classify both corpora and diff the per-type percentage shares."""
    answered_shares, n_answered = _type_shares(answered, config)
    unanswered_shares, n_unanswered = _type_shares(unanswered, config)
    diffs = {qt: unanswered_shares[qt] - answered_shares[qt] for qt in QuestionType}
    return TypeDistributionDiff(diffs=diffs, n_answered=n_answered, n_unanswered=n_unanswered)


def answer_rate(decisions: Sequence[object]) -> float:
    """Percentage of decisions with answered == True.

    Accepts AnswerDecision-like objects (anything with an `answered`
    attribute) or plain booleans/ints.
    """
    if not decisions:
        raise EmptyInput("answer rate needs at least one decision")
    answered = 0
    for decision in decisions:
        flag = getattr(decision, "answered", decision)
        answered += 1 if flag else 0
    return 100.0 * answered / len(decisions)


@dataclass(frozen=True)
class Crosstab:
    """2x2 contingency table over two binary outcome series."""

    counts: Dict[Tuple[int, int], int]
    n: int

    def percentage(self, a: int, b: int) -> float:
        return 100.0 * self.counts[(a, b)] / self.n

    def marginal_a(self) -> float:
        """P(A=1) as a percentage, from the table cells."""
        return self.percentage(1, 0) + self.percentage(1, 1)

    def marginal_b(self) -> float:
        return self.percentage(0, 1) + self.percentage(1, 1)

    def to_json_dict(self) -> Dict[str, object]:
        cells = {}
        for a in (0, 1):
            for b in (0, 1):
                cells[f"a{a}_b{b}"] = {
                    "count": self.counts[(a, b)],
                    "pct": self.percentage(a, b),
                }
        return {"n": self.n, "cells": cells}


def crosstab(flags_a: Sequence[int], flags_b: Sequence[int]) -> Crosstab:
    """Cross-tabulate two aligned binary series."""
    if len(flags_a) != len(flags_b):
        raise LengthMismatch(f"series lengths differ: {len(flags_a)} vs {len(flags_b)}")
    if not flags_a:
        raise EmptyInput("crosstab needs at least one paired flag")
    counts = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0}
    for a, b in zip(flags_a, flags_b):
        counts[(1 if a else 0, 1 if b else 0)] += 1
    return Crosstab(counts=counts, n=len(flags_a))


@dataclass(frozen=True)
class DeltaCell:
    """Per (source type, operator) reformulation change averages."""

    n: int
    len_rel_change: float
    ttr_rel_change: float


@dataclass(frozen=True)
class DeltaReport:
    """How reformulation changed question length and type-token ratio."""

    cells: Dict[Tuple[QuestionType, str], DeltaCell]
    operator_micro: Dict[str, float]

    def to_json_dict(self) -> Dict[str, object]:
        rows = []
        for (qtype, op_label), cell in sorted(
            self.cells.items(), key=lambda kv: (kv[0][1], kv[0][0].value)
        ):
            rows.append(
                {
                    "source_type": qtype.value,
                    "operator": op_label,
                    "n": cell.n,
                    "len_rel_change": cell.len_rel_change,
                    "ttr_rel_change": cell.ttr_rel_change,
                }
            )
        return {
            "cells": rows,
            "operator_micro_len_change": dict(sorted(self.operator_micro.items())),
        }


def delta_report(
    pairs: Iterable[Tuple[str, str, str, Optional[QuestionType]]],
    config: KeywordConfig = DEFAULT_CONFIG,
) -> DeltaReport:
    """Mean relative changes per (source type, operator label).

    Each pair is (original, reformulated, operator label, source type);
    a missing source type is classified on the fly. Relative change is
    (after - before) / before; the per-operator micro average weights
    every sample equally across types.
    """
    sums: Dict[Tuple[QuestionType, str], List[float]] = {}
    op_len_sums: Dict[str, List[float]] = {}
    consumed = 0
    for original, reformulated, op_label, source_type in pairs:
        consumed += 1
        before = tokenize(original)
        after = tokenize(reformulated)
        if source_type is None:
            source_type = classify(before, config)
        len_change = (len(after) - len(before)) / len(before)
        ttr_before = type_token_ratio(before)
        ttr_change = (type_token_ratio(after) - ttr_before) / ttr_before
        key = (source_type, op_label)
        bucket = sums.setdefault(key, [0.0, 0.0, 0.0])
        bucket[0] += 1
        bucket[1] += len_change
        bucket[2] += ttr_change
        op_bucket = op_len_sums.setdefault(op_label, [0.0, 0.0])
        op_bucket[0] += 1
        op_bucket[1] += len_change
    if consumed == 0:
        raise EmptyInput("delta report needs at least one pair")
    cells = {
        key: DeltaCell(n=int(b[0]), len_rel_change=b[1] / b[0], ttr_rel_change=b[2] / b[0])
        for key, b in sums.items()
    }
    operator_micro = {op: b[1] / b[0] for op, b in op_len_sums.items()}
    return DeltaReport(cells=cells, operator_micro=operator_micro)
