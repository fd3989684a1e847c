"""Two-stage training of the prefix-controlled reformulation model.

Stage one pretrains on weakly-labeled REP/ROO pairs; stage two finetunes
on annotated pairs covering all operators, with GEN upsampled. Both
stages share one loop: Adam, teacher forcing, per-epoch validation loss,
early stopping once the validation loss stops improving for `patience`
consecutive epochs.
"""
from __future__ import annotations

import hashlib
import json
import random
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple

import torch

from .data import (
    DEFAULT_PREFIX_FORMAT,
    OPERATORS,
    PAD,
    PairRecord,
    Vocab,
    read_pairs,
    render_prefixed,
    split_validation,
    upsample_gen,
)
from .model import build_model, save_checkpoint


@dataclass
class TrainingConfig:
    """Hyperparameters; the defaults mirror the production recipe."""

    learning_rate: float = 1e-6
    batch_size: int = 16
    max_epochs: int = 20
    patience: int = 3
    prefix_format: str = DEFAULT_PREFIX_FORMAT
    base_model: str = "local-tiny"
    seed: int = 13
    val_fraction: float = 0.01
    # local-tiny model dimensions
    d_model: int = 64
    encoder_layers: int = 2
    decoder_layers: int = 2
    attention_heads: int = 2
    ffn_dim: int = 128
    max_positions: int = 64
    max_source_len: int = 48
    max_target_len: int = 48

    def __post_init__(self) -> None:
        positive = (
            "learning_rate", "batch_size", "max_epochs", "patience",
            "d_model", "encoder_layers", "decoder_layers", "attention_heads",
            "ffn_dim", "max_positions", "max_source_len", "max_target_len",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.patience >= self.max_epochs:
            raise ValueError("patience must be smaller than max_epochs")
        if not 0 < self.val_fraction < 1:
            raise ValueError("val_fraction must be in (0, 1)")


class EarlyStopper:
    """Stop after `patience` consecutive epochs without a new best loss."""

    def __init__(self, patience: int):
        if patience < 1:
            raise ValueError("patience must be at least 1")
        self.patience = patience
        self.best: Optional[float] = None
        self.stale_epochs = 0

    def update(self, val_loss: float) -> bool:
        """Record one epoch's validation loss; True means stop now."""
        if self.best is None or val_loss < self.best:
            self.best = val_loss
            self.stale_epochs = 0
        else:
            self.stale_epochs += 1
        return self.stale_epochs >= self.patience


@dataclass
class TrainingLog:
    """Per-epoch record; val_losses[0] is the untrained baseline."""

    train_losses: List[float] = field(default_factory=list)
    val_losses: List[float] = field(default_factory=list)
    epochs_run: int = 0
    stopped_early: bool = False

    def to_json_dict(self) -> dict:
        return asdict(self)


Sample = Tuple[List[int], List[int]]


def encode_pairs(pairs: Sequence[PairRecord], vocab: Vocab, config: TrainingConfig) -> List[Sample]:
    samples = []
    for pair in pairs:
        source = render_prefixed(pair.operator, pair.source, config.prefix_format)
        samples.append(
            (
                vocab.encode(source, config.max_source_len),
                vocab.encode(pair.target, config.max_target_len),
            )
        )
    return samples


def _collate(chunk: Sequence[Sample]) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    max_in = max(len(src) for src, _ in chunk)
    max_out = max(len(tgt) for _, tgt in chunk)
    input_ids = torch.full((len(chunk), max_in), PAD, dtype=torch.long)
    attention = torch.zeros((len(chunk), max_in), dtype=torch.long)
    labels = torch.full((len(chunk), max_out), -100, dtype=torch.long)
    for row, (src, tgt) in enumerate(chunk):
        input_ids[row, : len(src)] = torch.tensor(src, dtype=torch.long)
        attention[row, : len(src)] = 1
        labels[row, : len(tgt)] = torch.tensor(tgt, dtype=torch.long)
    return input_ids, attention, labels


def _batches(
    samples: Sequence[Sample], batch_size: int, rng: Optional[random.Random]
) -> Iterator[Tuple[torch.Tensor, torch.Tensor, torch.Tensor]]:
    order = list(range(len(samples)))
    if rng is not None:
        rng.shuffle(order)
    for start in range(0, len(order), batch_size):
        yield _collate([samples[i] for i in order[start : start + batch_size]])


def evaluate_loss(model, samples: Sequence[Sample], batch_size: int) -> float:
    """Mean validation loss (per batch) with teacher forcing."""
    model.eval()
    total = 0.0
    n = 0
    with torch.no_grad():
        for input_ids, attention, labels in _batches(samples, batch_size, rng=None):
            out = model(input_ids=input_ids, attention_mask=attention, labels=labels)
            total += float(out.loss)
            n += 1
    return total / n


def train_model(
    model,
    train_samples: Sequence[Sample],
    val_samples: Sequence[Sample],
    config: TrainingConfig,
) -> TrainingLog:
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    stopper = EarlyStopper(config.patience)
    shuffle_rng = random.Random(config.seed)
    log = TrainingLog()
    log.val_losses.append(evaluate_loss(model, val_samples, config.batch_size))
    for epoch in range(config.max_epochs):
        model.train()
        total = 0.0
        n = 0
        for input_ids, attention, labels in _batches(
            train_samples, config.batch_size, shuffle_rng
        ):
            out = model(input_ids=input_ids, attention_mask=attention, labels=labels)
            out.loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            total += float(out.loss.detach())
            n += 1
        log.train_losses.append(total / n)
        val_loss = evaluate_loss(model, val_samples, config.batch_size)
        log.val_losses.append(val_loss)
        log.epochs_run = epoch + 1
        if stopper.update(val_loss):
            log.stopped_early = True
            break
    return log


def _file_hash(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _seed_everything(seed: int) -> None:
    random.seed(seed)
    torch.manual_seed(seed)


def pretrain(pairs_path: str | Path, out_dir: str | Path, config: TrainingConfig) -> TrainingLog:
    """Stage one: train a fresh model on weakly-labeled REP/ROO pairs."""
    pairs = read_pairs(pairs_path)
    gen_count = sum(1 for p in pairs if p.operator == "GEN")
    if gen_count:
        raise ValueError(
            f"weak pretraining data must not contain GEN pairs ({gen_count} found)"
        )
    _seed_everything(config.seed)
    train_pairs, val_pairs = split_validation(pairs, config.val_fraction, config.seed)
    texts = [render_prefixed(p.operator, p.source, config.prefix_format) for p in pairs]
    texts += [p.target for p in pairs]
    vocab = Vocab.from_texts(texts)
    model = build_model(len(vocab), config)
    train_samples = encode_pairs(train_pairs, vocab, config)
    val_samples = encode_pairs(val_pairs, vocab, config)
    log = train_model(model, train_samples, val_samples, config)
    save_checkpoint(
        out_dir,
        model,
        vocab,
        config,
        meta={
            "stage": "pretrain",
            "pairs_file": str(pairs_path),
            "data_hash": _file_hash(pairs_path),
            "n_train": len(train_pairs),
            "n_val": len(val_pairs),
            "log": log.to_json_dict(),
        },
    )
    return log


def finetune(
    checkpoint_dir: str | Path,
    pairs_path: str | Path,
    out_dir: str | Path,
    config: TrainingConfig,
    upsample_factor: int = 5,
) -> TrainingLog:
    """Stage two: continue from a checkpoint on annotated pairs, all operators."""
    from .model import load_checkpoint  # local import to keep module load light

    model, vocab, _ = load_checkpoint(checkpoint_dir)
    pairs = read_pairs(pairs_path)
    present = {p.operator for p in pairs}
    missing = [op for op in OPERATORS if op not in present]
    if missing:
        warnings.warn(
            f"finetuning data lacks operators: {', '.join(missing)}", stacklevel=2
        )
    _seed_everything(config.seed)
    train_pairs, val_pairs = split_validation(pairs, config.val_fraction, config.seed)
    train_pairs = upsample_gen(train_pairs, upsample_factor)
    train_samples = encode_pairs(train_pairs, vocab, config)
    val_samples = encode_pairs(val_pairs, vocab, config)
    log = train_model(model, train_samples, val_samples, config)
    save_checkpoint(
        out_dir,
        model,
        vocab,
        config,
        meta={
            "stage": "finetune",
            "from_checkpoint": str(checkpoint_dir),
            "pairs_file": str(pairs_path),
            "data_hash": _file_hash(pairs_path),
            "upsample_factor": upsample_factor,
            "n_train": len(train_pairs),
            "n_val": len(val_pairs),
            "log": log.to_json_dict(),
        },
    )
    return log
