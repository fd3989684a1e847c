"""Canonical tokenization and per-question lexical features.

- tokenize: lowercase whitespace tokens, edge punctuation stripped,
  apostrophes split the token ("isn't" -> ["isn", "t"])
- IDF: smoothed ln((N + 1) / (df + 1)) + 1, defined for unseen terms
- FeatureVector: token/char length, type-token ratio, IDF and TF-IDF
  sums and means (TF is the raw within-question count)

Every other module tokenizes through here so that lengths, ratios, and
keyword matches are computed on the same token stream.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence

from .errors import EmptyCorpus, EmptyInput

_EDGE_PUNCT = ".,?!;:\"()[]“”"
_APOSTROPHES = ("'", "’")


def tokenize(text: str) -> List[str]:
    """Split raw text into normalized tokens, raising EmptyInput if none survive."""
    tokens: List[str] = []
    for chunk in text.lower().split():
        chunk = chunk.strip(_EDGE_PUNCT)
        for apo in _APOSTROPHES:
            chunk = chunk.replace(apo, " ")
        for part in chunk.split():
            part = part.strip(_EDGE_PUNCT)
            if part:
                tokens.append(part)
    if not tokens:
        raise EmptyInput(f"no tokens in {text!r}")
    return tokens


def type_token_ratio(tokens: Sequence[str]) -> float:
    """Distinct-token count over total count, in (0, 1]."""
    if not tokens:
        raise EmptyInput("type-token ratio needs at least one token")
    return len(set(tokens)) / len(tokens)


@dataclass(frozen=True)
class IdfModel:
    """Smoothed inverse document frequencies; build once, read many."""

    n_docs: int
    doc_freq: Dict[str, int]

    def idf(self, token: str) -> float:
        # Unseen tokens fall back to df = 0.
        return math.log((self.n_docs + 1) / (self.doc_freq.get(token, 0) + 1)) + 1.0


def build_idf(corpus: Iterable[Sequence[str]]) -> IdfModel:
    """Build an IdfModel from a stream of token sequences."""
    n = 0
    df: Counter[str] = Counter()
    for tokens in corpus:
        n += 1
        for tok in set(tokens):
            df[tok] += 1
    if n == 0:
        raise EmptyCorpus("IDF model needs at least one document")
    return IdfModel(n_docs=n, doc_freq=dict(df))


@dataclass(frozen=True)
class FeatureVector:
    """The seven per-question complexity features."""

    token_len: int
    char_len: int
    ttr: float
    idf_mean: float
    idf_sum: float
    tfidf_mean: float
    tfidf_sum: float


# Report/serialization order for the seven features.
FEATURE_NAMES = (
    "token_len",
    "char_len",
    "ttr",
    "idf_mean",
    "idf_sum",
    "tfidf_sum",
    "tfidf_mean",
)


def compute_features(text: str, idf: IdfModel) -> FeatureVector:
    """Compute all seven features for one question.

    char_len is measured on the normalized text (lowercased, single-spaced)
    so it stays consistent with the tokenizer. With raw-count TF, the
    TF-IDF sum coincides with the IDF sum over token occurrences; both are
    kept because they are reported as separate variables.
    """
    tokens = tokenize(text)
    n = len(tokens)
    counts = Counter(tokens)
    idf_sum = sum(idf.idf(tok) for tok in tokens)
    tfidf_sum = sum(tf * idf.idf(tok) for tok, tf in counts.items())
    return FeatureVector(
        token_len=n,
        char_len=len(" ".join(tokens)),
        ttr=len(counts) / n,
        idf_mean=idf_sum / n,
        idf_sum=idf_sum,
        tfidf_mean=tfidf_sum / n,
        tfidf_sum=tfidf_sum,
    )
