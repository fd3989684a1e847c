"""Deterministic desk-scale answerability oracle.

Lexical BM25 retrieval over a passage corpus, with a caller-supplied
confidence threshold deciding whether a question counts as answered.
A reproducible stand-in for a production QA backend: same index, same
question, same threshold always give the same decision.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import DuplicateId, EmptyCorpus
from .textkit import tokenize


@dataclass(frozen=True)
class AnswerDecision:
    """Oracle verdict for one question at one threshold."""

    answered: bool
    score: float
    top_passage_id: Optional[str]


class PassageIndex:
    """BM25 statistics over a passage corpus; immutable after build."""

    def __init__(
        self,
        term_freqs: Dict[str, Counter],
        lengths: Dict[str, int],
        doc_freq: Dict[str, int],
        k1: float,
        b: float,
    ):
        self._term_freqs = term_freqs
        self._lengths = lengths
        self._doc_freq = doc_freq
        self.k1 = k1
        self.b = b
        self.n_passages = len(term_freqs)
        self.avg_len = sum(lengths.values()) / len(lengths)
        # token -> [(passage id, term frequency)], ids sorted for determinism
        self._postings: Dict[str, List[Tuple[str, int]]] = {}
        for pid in sorted(term_freqs):
            for token, tf in term_freqs[pid].items():
                self._postings.setdefault(token, []).append((pid, tf))

    def idf(self, token: str) -> float:
        df = self._doc_freq.get(token, 0)
        # Non-negative variant, so scores stay >= 0.
        return math.log(1.0 + (self.n_passages - df + 0.5) / (df + 0.5))

    def scores(self, question: str) -> Dict[str, float]:
        """BM25 score for every passage sharing at least one token."""
        query_counts = Counter(tokenize(question))
        scores: Dict[str, float] = {}
        for token, q_count in query_counts.items():
            idf = self.idf(token)
            for pid, tf in self._postings.get(token, ()):
                norm = self.k1 * (1.0 - self.b + self.b * self._lengths[pid] / self.avg_len)
                scores[pid] = scores.get(pid, 0.0) + q_count * idf * tf * (self.k1 + 1.0) / (tf + norm)
        return scores


def build_index(
    passages: Iterable[Tuple[str, str]],
    k1: float = 1.2,
    b: float = 0.75,
) -> PassageIndex:
    """Build the index once from (id, text) passages."""
    if k1 <= 0:
        raise ValueError("k1 must be positive")
    if not 0 <= b <= 1:
        raise ValueError("b must be in [0, 1]")
    term_freqs: Dict[str, Counter] = {}
    lengths: Dict[str, int] = {}
    doc_freq: Dict[str, int] = {}
    for pid, text in passages:
        if pid in term_freqs:
            raise DuplicateId(f"duplicate passage id {pid!r}")
        tokens = tokenize(text)
        term_freqs[pid] = Counter(tokens)
        lengths[pid] = len(tokens)
        for token in term_freqs[pid]:
            doc_freq[token] = doc_freq.get(token, 0) + 1
    if not term_freqs:
        raise EmptyCorpus("passage index needs at least one passage")
    return PassageIndex(term_freqs, lengths, doc_freq, k1, b)


def answer(index: PassageIndex, question: str, threshold: float) -> AnswerDecision:
    """Decide answerability: best BM25 score against the threshold.

    Ties on score go to the lowest passage id. A question sharing no
    tokens with any passage has no candidate and is never answered.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    scores = index.scores(question)
    if not scores:
        return AnswerDecision(answered=False, score=0.0, top_passage_id=None)
    best_id = min(scores, key=lambda pid: (-scores[pid], pid))
    best_score = scores[best_id]
    return AnswerDecision(
        answered=best_score >= threshold,
        score=best_score,
        top_passage_id=best_id,
    )
