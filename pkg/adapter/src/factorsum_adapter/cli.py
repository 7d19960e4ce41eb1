"""Adapter command line: train / generate."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import AdapterConfig
from .data import DatasetError
from .generate import generate_views
from .train import train


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--checkpoint", default="tiny",
                        help="checkpoint dir, size preset (tiny/small), or hub model name")
    parser.add_argument("--max-source-length", type=int, default=1024)
    parser.add_argument("--max-target-length", type=int, default=128)
    parser.add_argument("--beams", type=int, default=4)
    parser.add_argument("--length-penalty", type=float, default=1.0)
    parser.add_argument("--learning-rate", type=float, default=5e-5)
    parser.add_argument("--steps", type=int, default=100)
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)


def _config_from(args: argparse.Namespace) -> AdapterConfig:
    return AdapterConfig(
        checkpoint=args.checkpoint,
        max_source_length=args.max_source_length,
        max_target_length=args.max_target_length,
        beams=args.beams,
        length_penalty=args.length_penalty,
        learning_rate=args.learning_rate,
        steps=args.steps,
        batch_size=args.batch_size,
        seed=args.seed,
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="factorsum-adapter",
        description="Train a view summarizer on an exported view dataset and emit summary views.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    train_parser = subparsers.add_parser("train")
    train_parser.add_argument("--data", required=True, help="training view dataset JSONL")
    train_parser.add_argument("--out", required=True, help="checkpoint output directory")
    _add_config_flags(train_parser)

    gen_parser = subparsers.add_parser("generate")
    gen_parser.add_argument("--views", required=True, help="document views JSONL")
    gen_parser.add_argument("--out", required=True, help="summary-view JSONL output path")
    _add_config_flags(gen_parser)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        if args.command == "train":
            result = train(args.data, _config_from(args), args.out)
            print(
                f"trained to step {result.total_steps}; "
                f"loss {result.initial_loss:.4f} -> {result.final_loss:.4f}; "
                f"checkpoint at {result.checkpoint_dir}"
            )
        else:
            result = generate_views(args.views, _config_from(args), args.out)
            print(
                f"wrote {result.n_views} summary views to {result.output_path}"
                + (f" ({result.n_errors} errors in {result.errors_path})" if result.n_errors else "")
            )
        return 0
    except (DatasetError, ValueError, OSError) as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
