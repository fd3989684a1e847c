"""Pair-file IO, prefix rendering, and the word-level vocabulary.

The backend consumes the toolkit's pair files as-is: newline-delimited
JSON with at least {"source", "target", "operator"} per line, operator
one of REP/ROO/GEN. Model inputs are built by pre-pending the operator
prefix to the source question ("ROO: <question>"); the colon separator
keeps the (operator, question) decomposition unambiguous.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

OPERATORS = ("REP", "ROO", "GEN")

DEFAULT_PREFIX_FORMAT = "{operator}: {question}"

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS = ("<pad>", "<s>", "</s>", "<unk>")


@dataclass(frozen=True)
class PairRecord:
    source: str
    target: str
    operator: str


def read_pairs(path: str | Path) -> List[PairRecord]:
    """Load training pairs, failing fast on malformed lines."""
    pairs: List[PairRecord] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                source = row["source"]
                target = row["target"]
                operator = row["operator"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad pair line: {exc}") from exc
            if operator not in OPERATORS:
                raise ValueError(f"{path}:{lineno}: unknown operator {operator!r}")
            if not str(source).strip() or not str(target).strip():
                raise ValueError(f"{path}:{lineno}: empty source or target")
            pairs.append(PairRecord(source=str(source), target=str(target), operator=operator))
    if not pairs:
        raise ValueError(f"no pairs in {path}")
    return pairs


def render_prefixed(operator: str, question: str, fmt: str = DEFAULT_PREFIX_FORMAT) -> str:
    if operator not in OPERATORS:
        raise ValueError(f"unknown operator {operator!r}")
    return fmt.format(operator=operator, question=question)


def parse_prefixed(text: str, fmt: str = DEFAULT_PREFIX_FORMAT) -> Tuple[str, str]:
    """Invert render_prefixed for the default colon-separated format."""
    for operator in OPERATORS:
        prefix = fmt.format(operator=operator, question="")
        if text.startswith(prefix):
            return operator, text[len(prefix):]
    raise ValueError(f"text does not start with an operator prefix: {text[:30]!r}")


def upsample_gen(pairs: Sequence[PairRecord], factor: int) -> List[PairRecord]:
    """Duplicate every GEN pair to `factor` adjacent copies."""
    if factor < 1:
        raise ValueError("factor must be a positive integer")
    out: List[PairRecord] = []
    for pair in pairs:
        out.extend([pair] * (factor if pair.operator == "GEN" else 1))
    return out


def split_validation(
    pairs: Sequence[PairRecord], fraction: float, seed: int
) -> Tuple[List[PairRecord], List[PairRecord]]:
    """Stable shuffled split; validation is the tail, never empty."""
    if not 0 < fraction < 1:
        raise ValueError("fraction must be in (0, 1)")
    if len(pairs) < 2:
        raise ValueError("need at least 2 pairs to hold out validation data")
    order = list(range(len(pairs)))
    random.Random(seed).shuffle(order)
    shuffled = [pairs[i] for i in order]
    n_val = max(1, int(len(pairs) * fraction))
    return shuffled[:-n_val], shuffled[-n_val:]


class Vocab:
    """Case-preserving whitespace vocabulary with fixed special tokens."""

    def __init__(self, tokens: Sequence[str]):
        expected = tuple(tokens[: len(SPECIALS)])
        if expected != SPECIALS:
            raise ValueError("vocabulary must start with the special tokens")
        self.tokens = list(tokens)
        self.index: Dict[str, int] = {tok: i for i, tok in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    @classmethod
    def from_texts(cls, texts: Iterable[str]) -> "Vocab":
        seen = set()
        for text in texts:
            seen.update(text.split())
        prefixes = [f"{op}:" for op in OPERATORS]
        body = sorted(seen - set(SPECIALS) - set(prefixes))
        return cls(list(SPECIALS) + prefixes + body)

    def encode(self, text: str, max_len: int) -> List[int]:
        ids = [self.index.get(tok, UNK) for tok in text.split()][: max_len - 1]
        return ids + [EOS]

    def decode(self, ids: Iterable[int]) -> str:
        words = []
        for i in ids:
            i = int(i)
            if i == EOS:
                break
            if i in (PAD, BOS, UNK):
                continue
            if 0 <= i < len(self.tokens):
                words.append(self.tokens[i])
        return " ".join(words)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.tokens, ensure_ascii=False, indent=0) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "Vocab":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))
