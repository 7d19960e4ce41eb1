"""End-to-end runs: corpus -> views -> provider -> composition -> report.

A RunConfig is a single flat JSON document; every field can be overridden
from the command line. Runs are pure functions of (config, input files,
seed): identical configs produce byte-identical artifacts.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import evaluator, optimizer, sampler, viewgen
from .corpus import Document, load_corpus
from .optimizer import BudgetMode, ComposedSummary, Guidance
from .sampler import SamplingConfig
from .textmetrics import count_words

PROVIDERS = ("file", "extractive", "oracle", "ensemble")


@dataclass
class RunConfig:
    corpus_path: str = ""
    split: str = "test"
    sample_factor: float = 0.2
    views_per_doc: int = 20
    provider: str = "extractive"
    views_path: Optional[str] = None
    ensemble_paths: list[str] = field(default_factory=list)
    extractive_k: int = 3
    advisor_path: Optional[str] = None
    budget_mode: str = "fixed"
    budget: Optional[float] = None
    budget_correction: float = 0.0
    content_mode: str = "none"
    alpha: float = 1.0
    beta: float = 1.0
    redundancy_threshold: float = 0.4
    patience: Optional[int] = None
    content_metric: str = "f1"
    rouge_l_mode: str = "lcs"
    out_dir: str = "out"
    seed: int = 0
    jobs: int = 1
    literal_pseudocode: bool = False

    @classmethod
    def from_json(cls, path: str | Path) -> "RunConfig":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**raw)

    def override(self, **updates) -> "RunConfig":
        updates = {k: v for k, v in updates.items() if v is not None}
        return dataclasses.replace(self, **updates)


class ConfigError(ValueError):
    """RunConfig fails validation before any work starts."""


def validate_corpus(config: RunConfig) -> None:
    if not config.corpus_path:
        raise ConfigError("corpus_path is required")
    if not Path(config.corpus_path).exists():
        raise ConfigError(f"corpus file not found: {config.corpus_path}")


def validate(config: RunConfig) -> None:
    validate_corpus(config)
    if config.provider not in PROVIDERS:
        raise ConfigError(f"provider must be one of {PROVIDERS}, got {config.provider!r}")
    if config.provider == "file":
        if not config.views_path:
            raise ConfigError("file provider requires views_path")
        if not Path(config.views_path).exists():
            raise ConfigError(f"views file not found: {config.views_path}")
    if config.provider == "ensemble":
        if not config.ensemble_paths:
            raise ConfigError("ensemble provider requires ensemble_paths")
        for path in config.ensemble_paths:
            if not Path(path).exists():
                raise ConfigError(f"ensemble summaries file not found: {path}")
    if config.budget_mode not in ("fixed", "oracle", "model"):
        raise ConfigError(f"unknown budget_mode {config.budget_mode!r}")
    if config.budget_mode == "fixed" and not config.budget:
        raise ConfigError("fixed budget mode requires a budget value")
    if config.content_mode not in optimizer.CONTENT_MODES:
        raise ConfigError(f"unknown content_mode {config.content_mode!r}")
    needs_advisor = config.budget_mode == "model" or config.content_mode == "model"
    if needs_advisor:
        if not config.advisor_path:
            raise ConfigError("model budget/content modes require advisor_path")
        if not Path(config.advisor_path).exists():
            raise ConfigError(f"advisor file not found: {config.advisor_path}")
    if config.jobs < 1:
        raise ConfigError("jobs must be >= 1")


def build_provider(config: RunConfig) -> viewgen.ViewProvider:
    if config.provider == "file":
        return viewgen.file_provider(config.views_path)
    if config.provider == "extractive":
        return viewgen.extractive_provider(config.extractive_k)
    if config.provider == "oracle":
        return viewgen.oracle_provider()
    return viewgen.ensemble_provider(config.ensemble_paths)


def _sampling_config(config: RunConfig, enforce_oracle: bool = False) -> SamplingConfig:
    return SamplingConfig(
        sample_factor=config.sample_factor,
        views_per_doc=config.views_per_doc,
        seed=config.seed,
        enforce_oracle=enforce_oracle,
    )


def document_pool(
    doc: Document, provider: viewgen.ViewProvider, config: RunConfig
) -> list[optimizer.Candidate]:
    """Candidate pool for one document under the configured provider."""
    doc_views = None
    if provider.needs_document_views:
        sampling = _sampling_config(config)
        doc_views = [
            sampler.sample_view(doc, sampling, i) for i in range(config.views_per_doc)
        ]
    views = provider.views_for(doc, doc_views)
    return optimizer.build_candidate_pool(views)


def _guidance_for(
    doc: Document,
    config: RunConfig,
    advisor: Optional[dict[str, str]],
    budget_override: Optional[float] = None,
) -> Guidance:
    if budget_override is not None:
        budget = budget_override + config.budget_correction
    else:
        mode = BudgetMode(
            kind=config.budget_mode,
            value=config.budget,
            correction=config.budget_correction,
        )
        budget = optimizer.make_budget(mode, doc, advisor)
    content = optimizer.make_content(config.content_mode, doc, budget, advisor)
    return Guidance(
        budget_words=budget,
        content=content,
        alpha=config.alpha,
        beta=config.beta,
        redundancy_threshold=config.redundancy_threshold,
        patience=config.patience if config.patience is not None else config.views_per_doc,
        content_metric=config.content_metric,
    )


def _compose_task(
    args: tuple[list[optimizer.Candidate], Guidance, bool]
) -> ComposedSummary:
    pool, guidance, literal = args
    summary = optimizer.greedy_compose(pool, guidance, literal_pseudocode=literal)
    if guidance.content is not None:
        summary = optimizer.reorder_by_guidance(summary, guidance.content)
    return summary


@dataclass(frozen=True)
class DocumentResult:
    doc_id: str
    summary: ComposedSummary
    budget: float
    guidance_mode: str

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "summary": self.summary.text,
            "words": self.summary.total_words,
            "energy": self.summary.energy,
            "budget": self.budget,
            "guidance_mode": self.guidance_mode,
        }


def compose_corpus(
    documents: Sequence[Document],
    pools: Sequence[list[optimizer.Candidate]],
    config: RunConfig,
    advisor: Optional[dict[str, str]] = None,
    budget_override: Optional[float] = None,
) -> list[DocumentResult]:
    """Compose every document from its prebuilt pool; input order preserved."""
    guidances = [
        _guidance_for(doc, config, advisor, budget_override) for doc in documents
    ]
    tasks = [
        (pool, guidance, config.literal_pseudocode)
        for pool, guidance in zip(pools, guidances)
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool_exec:
            summaries = list(pool_exec.map(_compose_task, tasks))
    else:
        summaries = [_compose_task(task) for task in tasks]
    mode_label = f"{config.budget_mode}+{config.content_mode}"
    return [
        DocumentResult(doc.id, summary, guidance.budget_words, mode_label)
        for doc, summary, guidance in zip(documents, summaries, guidances)
    ]


def _load_inputs(config: RunConfig):
    documents = load_corpus(config.corpus_path, split=config.split)
    provider = build_provider(config)
    advisor = (
        viewgen.load_advisor_table(config.advisor_path) if config.advisor_path else None
    )
    return documents, provider, advisor


def write_results(results: Sequence[DocumentResult], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for result in results:
            f.write(json.dumps(result.to_record(), ensure_ascii=False) + "\n")


def run_generate(config: RunConfig) -> tuple[list[DocumentResult], Optional[evaluator.EvalReport]]:
    """Full pipeline; writes summaries.jsonl plus report.json/report.txt when
    references exist."""
    validate(config)
    documents, provider, advisor = _load_inputs(config)
    pools = [document_pool(doc, provider, config) for doc in documents]
    results = compose_corpus(documents, pools, config, advisor)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_results(results, out_dir / "summaries.jsonl")

    report = None
    scorable = [doc for doc in documents if doc.reference]
    if scorable:
        predictions = {r.doc_id: r.summary.text for r in results}
        report = evaluator.evaluate(
            {doc.id: predictions[doc.id] for doc in scorable},
            scorable,
            rouge_l_mode=config.rouge_l_mode,
        )
        (out_dir / "report.json").write_text(evaluator.report_to_json(report))
        (out_dir / "report.txt").write_text(evaluator.format_report(report) + "\n")
    return results, report


def run_sweep(
    config: RunConfig, budgets: Sequence[float]
) -> dict[float, evaluator.EvalReport]:
    """Evaluate a grid of budgets over a single fixed set of candidate pools."""
    validate(config)
    documents, provider, advisor = _load_inputs(config)
    scorable = [doc for doc in documents if doc.reference]
    if not scorable:
        raise ConfigError("budget sweep needs reference summaries")
    pools = [document_pool(doc, provider, config) for doc in scorable]

    def compose_at(budget: float) -> dict[str, str]:
        results = compose_corpus(scorable, pools, config, advisor, budget_override=budget)
        return {r.doc_id: r.summary.text for r in results}

    table = evaluator.budget_sweep(
        compose_at, scorable, budgets, rouge_l_mode=config.rouge_l_mode
    )
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "sweep.csv").write_text(evaluator.sweep_to_csv(table) + "\n")
    return table


def run_calibrate(
    config: RunConfig,
    target_mean: Optional[float] = None,
    max_rounds: int = 5,
    tolerance: float = 2.0,
) -> tuple[float, list[tuple[float, float]]]:
    """Iterate the additive budget correction until mean system length is
    within tolerance of the target (default: mean reference length)."""
    validate(config)
    documents, provider, advisor = _load_inputs(config)
    scorable = [doc for doc in documents if doc.reference]
    if not scorable:
        raise ConfigError("calibration needs reference summaries")
    if target_mean is None:
        target_mean = sum(count_words(d.reference_text) for d in scorable) / len(scorable)
    pools = [document_pool(doc, provider, config) for doc in scorable]

    def lengths_at(correction: float) -> list[float]:
        adjusted = config.override(budget_correction=correction)
        results = compose_corpus(scorable, pools, adjusted, advisor)
        return [float(r.summary.total_words) for r in results]

    return optimizer.calibrate_correction(
        lengths_at,
        target_mean,
        max_rounds=max_rounds,
        tolerance=tolerance,
        initial=config.budget_correction,
    )


def run_view_export(config: RunConfig, enforce_oracle: bool, out_path: str | Path) -> int:
    """Write the document-view dataset (training contract when enforced)."""
    validate_corpus(config)
    documents = load_corpus(config.corpus_path, split=config.split)
    records = sampler.build_view_dataset(
        documents, _sampling_config(config, enforce_oracle=enforce_oracle)
    )
    sampler.write_view_dataset(records, out_path)
    return len(records)
