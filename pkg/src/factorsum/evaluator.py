"""ROUGE evaluation harness: per-document scores, paired bootstrap
significance, and budget sweeps over a fixed candidate pool."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .corpus import Document
from .textmetrics import count_words, rouge_l, rouge_l_summary, rouge_n, tokenize_words


@dataclass(frozen=True)
class DocScore:
    doc_id: str
    r1: float
    r2: float
    rl: float
    words: int


@dataclass(frozen=True)
class EvalReport:
    r1: float
    r2: float
    rl: float
    mean_words: float
    n: int
    per_doc: tuple[DocScore, ...]


ReferenceTable = Union[Sequence[Document], Mapping[str, str]]


def _reference_map(references: ReferenceTable) -> dict[str, str]:
    if isinstance(references, Mapping):
        return dict(references)
    table = {}
    for doc in references:
        if doc.reference:
            table[doc.id] = doc.reference_text
    return table


def evaluate(
    predictions: Mapping[str, str],
    references: ReferenceTable,
    stem: bool = True,
    rouge_l_mode: str = "lcs",
) -> EvalReport:
    """Macro-averaged ROUGE-1/2/L F1 and mean word count.

    rouge_l_mode "lcs" scores the whole texts; "sum" uses the newline-split
    summary-level variant.
    """
    if rouge_l_mode not in ("lcs", "sum"):
        raise ValueError(f"rouge_l_mode must be 'lcs' or 'sum', got {rouge_l_mode!r}")
    refs = _reference_map(references)
    missing = sorted(set(predictions) - set(refs))
    if missing:
        raise ValueError(f"predictions without references: {missing}")

    per_doc = []
    for doc_id in predictions:
        pred, ref = predictions[doc_id], refs[doc_id]
        pred_tokens = tokenize_words(pred, stem=stem)
        ref_tokens = tokenize_words(ref, stem=stem)
        if rouge_l_mode == "sum":
            rl = rouge_l_summary(
                [tokenize_words(line, stem=stem) for line in pred.splitlines() if line.strip()],
                [tokenize_words(line, stem=stem) for line in ref.splitlines() if line.strip()],
            ).f1
        else:
            rl = rouge_l(pred_tokens, ref_tokens).f1
        per_doc.append(
            DocScore(
                doc_id=doc_id,
                r1=rouge_n(pred_tokens, ref_tokens, 1).f1,
                r2=rouge_n(pred_tokens, ref_tokens, 2).f1,
                rl=rl,
                words=count_words(pred),
            )
        )
    n = len(per_doc)
    if n == 0:
        return EvalReport(0.0, 0.0, 0.0, 0.0, 0, ())
    return EvalReport(
        r1=sum(d.r1 for d in per_doc) / n,
        r2=sum(d.r2 for d in per_doc) / n,
        rl=sum(d.rl for d in per_doc) / n,
        mean_words=sum(d.words for d in per_doc) / n,
        n=n,
        per_doc=tuple(per_doc),
    )


def paired_bootstrap(
    per_doc_a: Sequence[float],
    per_doc_b: Sequence[float],
    resamples: int = 10000,
    seed: int = 0,
) -> float:
    """Two-sided bootstrap p-value for the mean paired difference.

    Resamples documents with replacement; p = 2 * min(P(delta* <= 0),
    P(delta* >= 0)), clipped to 1.
    """
    if len(per_doc_a) != len(per_doc_b):
        raise ValueError(
            f"paired scores differ in length: {len(per_doc_a)} vs {len(per_doc_b)}"
        )
    if len(per_doc_a) < 2:
        raise ValueError("paired bootstrap needs at least 2 documents")
    deltas = np.asarray(per_doc_a, dtype=float) - np.asarray(per_doc_b, dtype=float)
    rng = np.random.default_rng(seed)
    indices = rng.integers(0, len(deltas), size=(resamples, len(deltas)))
    means = deltas[indices].mean(axis=1)
    p_low = float(np.mean(means <= 0.0))
    p_high = float(np.mean(means >= 0.0))
    return min(1.0, 2.0 * min(p_low, p_high))


def bootstrap_ci(
    per_doc: Sequence[float],
    resamples: int = 10000,
    seed: int = 0,
    level: float = 0.95,
) -> tuple[float, float]:
    """Percentile bootstrap confidence interval for a mean score."""
    values = np.asarray(per_doc, dtype=float)
    rng = np.random.default_rng(seed)
    indices = rng.integers(0, len(values), size=(resamples, len(values)))
    means = np.sort(values[indices].mean(axis=1))
    lo = (1.0 - level) / 2.0
    return (
        float(np.quantile(means, lo)),
        float(np.quantile(means, 1.0 - lo)),
    )


def budget_sweep(
    compose_fn: Callable[[float], Mapping[str, str]],
    references: ReferenceTable,
    budgets: Sequence[float],
    **evaluate_kwargs,
) -> dict[float, EvalReport]:
    """Evaluate compose_fn's summaries at each budget.

    compose_fn maps a budget to predictions; callers keep the candidate
    pool fixed across budgets so the sweep isolates the budget effect.
    """
    return {
        budget: evaluate(compose_fn(budget), references, **evaluate_kwargs)
        for budget in budgets
    }


def report_to_json(report: EvalReport) -> str:
    return json.dumps(
        {
            "r1": report.r1,
            "r2": report.r2,
            "rl": report.rl,
            "mean_words": report.mean_words,
            "n": report.n,
            "per_doc": [
                {"doc_id": d.doc_id, "r1": d.r1, "r2": d.r2, "rl": d.rl, "words": d.words}
                for d in report.per_doc
            ],
        },
        indent=2,
    )


def format_report(report: EvalReport) -> str:
    """Aligned-column text report."""
    lines = [
        f"{'doc_id':<24} {'R-1':>8} {'R-2':>8} {'R-L':>8} {'words':>7}",
    ]
    for d in report.per_doc:
        lines.append(
            f"{d.doc_id:<24} {d.r1:>8.4f} {d.r2:>8.4f} {d.rl:>8.4f} {d.words:>7d}"
        )
    lines.append(
        f"{'mean (n=' + str(report.n) + ')':<24} "
        f"{report.r1:>8.4f} {report.r2:>8.4f} {report.rl:>8.4f} {report.mean_words:>7.1f}"
    )
    return "\n".join(lines)


def sweep_to_csv(table: Mapping[float, EvalReport]) -> str:
    lines = ["budget,r1,r2,rl,mean_words"]
    for budget in sorted(table):
        r = table[budget]
        lines.append(f"{budget:g},{r.r1:.6f},{r.r2:.6f},{r.rl:.6f},{r.mean_words:.2f}")
    return "\n".join(lines)
