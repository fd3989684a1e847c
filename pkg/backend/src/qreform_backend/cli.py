"""Training and serving entry points: pretrain, finetune, serve."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .server import serve
from .training import TrainingConfig, finetune, pretrain


def _add_training_flags(parser: argparse.ArgumentParser) -> None:
    defaults = TrainingConfig()
    parser.add_argument("--lr", type=float, default=defaults.learning_rate)
    parser.add_argument("--batch-size", type=int, default=defaults.batch_size)
    parser.add_argument("--max-epochs", type=int, default=defaults.max_epochs)
    parser.add_argument("--patience", type=int, default=defaults.patience)
    parser.add_argument("--seed", type=int, default=defaults.seed)
    parser.add_argument("--base-model", default=defaults.base_model)
    parser.add_argument("--d-model", type=int, default=defaults.d_model)
    parser.add_argument("--layers", type=int, default=defaults.encoder_layers)


def _config(args: argparse.Namespace, val_fraction: float) -> TrainingConfig:
    return TrainingConfig(
        learning_rate=args.lr,
        batch_size=args.batch_size,
        max_epochs=args.max_epochs,
        patience=args.patience,
        seed=args.seed,
        base_model=args.base_model,
        d_model=args.d_model,
        encoder_layers=args.layers,
        decoder_layers=args.layers,
        val_fraction=val_fraction,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qreform-backend",
        description="Prefix-controlled seq2seq reformulation backend",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("pretrain", help="stage one: train on weak REP/ROO pairs")
    p.add_argument("--pairs", required=True, help="weak pair file (ndjson)")
    p.add_argument("--out", required=True, help="checkpoint directory")
    p.add_argument("--val-fraction", type=float, default=0.01)
    _add_training_flags(p)

    p = sub.add_parser("finetune", help="stage two: continue on annotated pairs")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--pairs", required=True, help="annotated pair file (ndjson)")
    p.add_argument("--out", required=True, help="checkpoint directory")
    p.add_argument("--upsample-factor", type=int, default=5)
    p.add_argument("--val-fraction", type=float, default=0.1)
    _add_training_flags(p)

    p = sub.add_parser("serve", help="serve a checkpoint on the wire protocol")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8260)

    args = parser.parse_args(argv)
    try:
        if args.subcommand == "pretrain":
            log = pretrain(args.pairs, args.out, _config(args, args.val_fraction))
        elif args.subcommand == "finetune":
            log = finetune(
                args.checkpoint,
                args.pairs,
                args.out,
                _config(args, args.val_fraction),
                upsample_factor=args.upsample_factor,
            )
        else:
            serve(args.checkpoint, host=args.host, port=args.port)
            return 0
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"{args.subcommand} done: {log.epochs_run} epochs"
        f"{' (early stop)' if log.stopped_early else ''}, "
        f"val loss {log.val_losses[0]:.4f} -> {log.val_losses[-1]:.4f}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
