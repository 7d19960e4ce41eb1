"""Command-line interface.

Subcommands: stats, sample-views, export-train, generate, evaluate,
coverage, sweep, calibrate. A JSON config file supplies defaults; every
field can be overridden with --set field=value or the dedicated flags.
The seed falls back to the FACTORSUM_SEED environment variable.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import evaluator, pipeline, sampler, viewgen
from .corpus import corpus_stats, load_corpus
from .pipeline import ConfigError, RunConfig


def _parse_set(values: list[str]) -> dict:
    updates = {}
    for item in values:
        if "=" not in item:
            raise ConfigError(f"--set expects field=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            updates[key] = json.loads(raw)
        except json.JSONDecodeError:
            updates[key] = raw
    return updates


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, help="JSON run configuration")
    parser.add_argument("--corpus", type=str, help="corpus JSONL path")
    parser.add_argument("--split", type=str, help="split name used for synthesized ids")
    parser.add_argument("--seed", type=int, help="global random seed")
    parser.add_argument("--jobs", type=int, help="document-level worker processes")
    parser.add_argument("--s-f", dest="s_f", type=float, help="view sampling factor")
    parser.add_argument("--n-d", dest="n_d", type=int, help="views per document")
    parser.add_argument("--budget-mode", choices=["fixed", "oracle", "model"])
    parser.add_argument("--budget", type=float, help="fixed budget in words")
    parser.add_argument("--budget-correction", type=float, help="additive correction")
    parser.add_argument("--content-mode", choices=list(pipeline.optimizer.CONTENT_MODES))
    parser.add_argument("--alpha", type=float, help="budget term weight")
    parser.add_argument("--beta", type=float, help="content term weight")
    parser.add_argument("--redundancy-t", dest="redundancy_t", type=float)
    parser.add_argument("--patience", type=int)
    parser.add_argument("--provider", choices=list(pipeline.PROVIDERS))
    parser.add_argument("--views", type=str, help="summary-view JSONL (file provider)")
    parser.add_argument(
        "--ensemble", type=str, help="comma-separated advisor summary JSONL paths"
    )
    parser.add_argument("--advisor", type=str, help="advisor summaries JSONL")
    parser.add_argument("--extractive-k", dest="extractive_k", type=int)
    parser.add_argument("--out", type=str, help="output directory")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="FIELD=VALUE",
        help="override any RunConfig field",
    )


def _build_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_json(args.config) if args.config else RunConfig()
    # seed precedence: flag > FACTORSUM_SEED > config file > default
    seed = args.seed
    if seed is None:
        env_seed = os.environ.get("FACTORSUM_SEED")
        if env_seed:
            seed = int(env_seed)
    overrides = dict(
        corpus_path=args.corpus,
        split=args.split,
        seed=seed,
        jobs=args.jobs,
        sample_factor=args.s_f,
        views_per_doc=args.n_d,
        budget_mode=args.budget_mode,
        budget=args.budget,
        budget_correction=args.budget_correction,
        content_mode=args.content_mode,
        alpha=args.alpha,
        beta=args.beta,
        redundancy_threshold=args.redundancy_t,
        patience=args.patience,
        provider=args.provider,
        views_path=args.views,
        advisor_path=args.advisor,
        extractive_k=args.extractive_k,
        out_dir=args.out,
    )
    if args.ensemble:
        overrides["ensemble_paths"] = [p for p in args.ensemble.split(",") if p]
    config = config.override(**overrides)
    if args.set:
        known = {f.name for f in dataclasses.fields(RunConfig)}
        updates = _parse_set(args.set)
        unknown = set(updates) - known
        if unknown:
            raise ConfigError(f"unknown config fields in --set: {sorted(unknown)}")
        config = config.override(**updates)
    return config


def _cmd_stats(config: RunConfig, args) -> int:
    documents = load_corpus(config.corpus_path, split=config.split)
    stats = corpus_stats(documents)
    print(json.dumps(dataclasses.asdict(stats), indent=2))
    return 0


def _cmd_sample_views(config: RunConfig, args) -> int:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = pipeline.run_view_export(config, enforce_oracle=False, out_path=out_dir / "views.jsonl")
    print(f"wrote {n} view records to {out_dir / 'views.jsonl'}")
    return 0


def _cmd_export_train(config: RunConfig, args) -> int:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = pipeline.run_view_export(
        config, enforce_oracle=True, out_path=out_dir / "train_views.jsonl"
    )
    print(f"wrote {n} training view records to {out_dir / 'train_views.jsonl'}")
    return 0


def _cmd_generate(config: RunConfig, args) -> int:
    results, report = pipeline.run_generate(config)
    print(f"wrote {len(results)} summaries to {Path(config.out_dir) / 'summaries.jsonl'}")
    if report is not None:
        print(
            f"R-1 {report.r1:.4f}  R-2 {report.r2:.4f}  R-L {report.rl:.4f}  "
            f"mean words {report.mean_words:.1f} (n={report.n})"
        )
    return 0


def _cmd_evaluate(config: RunConfig, args) -> int:
    documents = load_corpus(config.corpus_path, split=config.split)
    predictions = {}
    with open(args.predictions, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                record = json.loads(line)
                predictions[str(record["doc_id"])] = str(record["summary"])
    report = evaluator.evaluate(
        predictions, documents, rouge_l_mode=config.rouge_l_mode
    )
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(evaluator.report_to_json(report))
    (out_dir / "report.txt").write_text(evaluator.format_report(report) + "\n")
    print(evaluator.format_report(report))
    if args.compare:
        other = {}
        with open(args.compare, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    record = json.loads(line)
                    other[str(record["doc_id"])] = str(record["summary"])
        other_report = evaluator.evaluate(other, documents, rouge_l_mode=config.rouge_l_mode)
        shared = [d.doc_id for d in report.per_doc if d.doc_id in other]
        a = {d.doc_id: d.r1 for d in report.per_doc}
        b = {d.doc_id: d.r1 for d in other_report.per_doc}
        p = evaluator.paired_bootstrap(
            [a[i] for i in shared], [b[i] for i in shared], seed=config.seed
        )
        print(f"paired bootstrap p-value (R-1 vs {args.compare}): {p:.4f}")
    return 0


def _cmd_coverage(config: RunConfig, args) -> int:
    documents = load_corpus(config.corpus_path, split=config.split)
    coverage, mean_sentences = sampler.coverage_stats(
        documents, config.sample_factor, config.views_per_doc, config.seed
    )
    print(
        json.dumps(
            {
                "coverage_pct": coverage,
                "mean_view_sentences": mean_sentences,
                "sample_factor": config.sample_factor,
                "views_per_doc": config.views_per_doc,
            },
            indent=2,
        )
    )
    return 0


def _cmd_sweep(config: RunConfig, args) -> int:
    budgets = [float(b) for b in args.budgets.split(",") if b]
    table = pipeline.run_sweep(config, budgets)
    print(evaluator.sweep_to_csv(table))
    return 0


def _cmd_calibrate(config: RunConfig, args) -> int:
    correction, history = pipeline.run_calibrate(
        config,
        target_mean=args.target,
        max_rounds=args.rounds,
        tolerance=args.tolerance,
    )
    print(
        json.dumps(
            {
                "correction": correction,
                "history": [
                    {"correction": c, "mean_system_words": m} for c, m in history
                ],
            },
            indent=2,
        )
    )
    return 0


_COMMANDS = {
    "stats": _cmd_stats,
    "sample-views": _cmd_sample_views,
    "export-train": _cmd_export_train,
    "generate": _cmd_generate,
    "evaluate": _cmd_evaluate,
    "coverage": _cmd_coverage,
    "sweep": _cmd_sweep,
    "calibrate": _cmd_calibrate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factorsum",
        description="Compose summaries from sampled document views under budget and content guidance.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sub = subparsers.add_parser(name)
        _add_common_flags(sub)
        if name == "evaluate":
            sub.add_argument("--predictions", required=True, help="summaries JSONL")
            sub.add_argument("--compare", help="second summaries JSONL for significance")
        if name == "sweep":
            sub.add_argument("--budgets", required=True, help="comma-separated budgets")
        if name == "calibrate":
            sub.add_argument("--target", type=float, help="target mean words")
            sub.add_argument("--rounds", type=int, default=5)
            sub.add_argument("--tolerance", type=float, default=2.0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _build_config(args)
        return _COMMANDS[args.command](config, args)
    except (ConfigError, ValueError, KeyError, OSError) as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
