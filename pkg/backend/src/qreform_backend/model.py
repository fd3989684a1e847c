"""Model construction and checkpoint IO.

The default base model is a locally-initialized small BART-class
encoder-decoder sized by the training config ("local-tiny"); any
pretrained encoder-decoder checkpoint id can be substituted where hub
access exists. Checkpoints are directories holding the model weights,
the vocabulary, the training config, and a metadata record.
"""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Tuple

from transformers import BartConfig, BartForConditionalGeneration
from transformers.utils import logging as hf_logging

from .data import BOS, EOS, PAD, Vocab

hf_logging.disable_progress_bar()

VOCAB_FILE = "vocab.json"
META_FILE = "meta.json"
TRAIN_CONFIG_FILE = "train_config.json"


def build_model(vocab_size: int, config) -> BartForConditionalGeneration:
    """Fresh BART-class seq2seq model sized from the training config."""
    if config.base_model != "local-tiny":
        return BartForConditionalGeneration.from_pretrained(config.base_model)
    model_config = BartConfig(
        vocab_size=vocab_size,
        d_model=config.d_model,
        encoder_layers=config.encoder_layers,
        decoder_layers=config.decoder_layers,
        encoder_attention_heads=config.attention_heads,
        decoder_attention_heads=config.attention_heads,
        encoder_ffn_dim=config.ffn_dim,
        decoder_ffn_dim=config.ffn_dim,
        max_position_embeddings=config.max_positions,
        pad_token_id=PAD,
        bos_token_id=BOS,
        eos_token_id=EOS,
        decoder_start_token_id=BOS,
        forced_eos_token_id=None,
    )
    return BartForConditionalGeneration(model_config)


def save_checkpoint(
    out_dir: str | Path,
    model: BartForConditionalGeneration,
    vocab: Vocab,
    config,
    meta: Dict[str, Any],
) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    vocab.save(out_dir / VOCAB_FILE)
    (out_dir / TRAIN_CONFIG_FILE).write_text(
        json.dumps(asdict(config), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (out_dir / META_FILE).write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return out_dir


def load_checkpoint(
    checkpoint_dir: str | Path,
) -> Tuple[BartForConditionalGeneration, Vocab, Dict[str, Any]]:
    checkpoint_dir = Path(checkpoint_dir)
    if not checkpoint_dir.is_dir():
        raise FileNotFoundError(f"checkpoint directory not found: {checkpoint_dir}")
    model = BartForConditionalGeneration.from_pretrained(checkpoint_dir)
    vocab = Vocab.load(checkpoint_dir / VOCAB_FILE)
    meta_path = checkpoint_dir / META_FILE
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
    return model, vocab, meta
