"""Random document views, oracle alignment, and view-dataset construction.

A document view is an order-preserving random subset of a document's
sentences. View sampling is deterministic given (seed, doc id, view
index), so results do not depend on corpus order or parallel scheduling.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .corpus import Document
from .textmetrics import rouge_n, tokenize_words

_MAX_RESAMPLE_ATTEMPTS = 50


@dataclass(frozen=True)
class SamplingConfig:
    sample_factor: float = 0.2
    views_per_doc: int = 20
    seed: int = 0
    enforce_oracle: bool = False

    def __post_init__(self):
        if not 0.0 < self.sample_factor <= 1.0:
            raise ValueError(f"sample_factor must be in (0, 1], got {self.sample_factor}")
        if self.views_per_doc < 1:
            raise ValueError(f"views_per_doc must be >= 1, got {self.views_per_doc}")


@dataclass(frozen=True)
class DocumentView:
    doc_id: str
    view_index: int
    sentence_indices: tuple[int, ...]
    seed: int

    def sentences(self, doc: Document) -> list[str]:
        return [doc.sentences[i] for i in self.sentence_indices]

    def text(self, doc: Document) -> str:
        return " ".join(self.sentences(doc))


@dataclass(frozen=True)
class OracleAlignment:
    # one (ref_index, doc_index, score) triple per reference sentence
    pairs: tuple[tuple[int, int, float], ...]

    def doc_indices(self) -> set[int]:
        return {doc_idx for _, doc_idx, _ in self.pairs}


@dataclass(frozen=True)
class ViewRecord:
    view: DocumentView
    source_text: str
    target_text: str


def view_size(n_sentences: int, sample_factor: float) -> int:
    """Round-half-up view size with a floor of one sentence."""
    return min(n_sentences, max(1, int(sample_factor * n_sentences + 0.5)))


def _stream_seed(seed: int, doc_id: str, view_index: int, tag: str = "") -> int:
    key = f"{seed}:{doc_id}:{view_index}:{tag}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def _draw_indices(doc: Document, config: SamplingConfig, view_index: int, tag: str = "") -> tuple[int, ...]:
    n = len(doc.sentences)
    k = view_size(n, config.sample_factor)
    rng = random.Random(_stream_seed(config.seed, doc.id, view_index, tag))
    return tuple(sorted(rng.sample(range(n), k)))


def sample_view(doc: Document, config: SamplingConfig, view_index: int) -> DocumentView:
    """Uniform order-preserving sample of sentence indices."""
    return DocumentView(
        doc_id=doc.id,
        view_index=view_index,
        sentence_indices=_draw_indices(doc, config, view_index),
        seed=config.seed,
    )


def align_oracle(doc: Document) -> OracleAlignment:
    """Best-matching document sentence per reference sentence.

    The oracle for a reference sentence maximizes ROUGE-1 F1 + ROUGE-2 F1;
    ties go to the smallest document index.
    """
    if not doc.reference:
        raise ValueError(f"document {doc.id!r} has no reference summary")
    doc_tokens = [tokenize_words(s, stem=True) for s in doc.sentences]
    pairs = []
    for ref_index, ref_sentence in enumerate(doc.reference):
        ref_tokens = tokenize_words(ref_sentence, stem=True)
        best_index, best_score = 0, -1.0
        for doc_index, tokens in enumerate(doc_tokens):
            score = (
                rouge_n(tokens, ref_tokens, 1).f1 + rouge_n(tokens, ref_tokens, 2).f1
            )
            if score > best_score:
                best_index, best_score = doc_index, score
        pairs.append((ref_index, best_index, best_score))
    return OracleAlignment(pairs=tuple(pairs))


def reference_view(doc: Document, alignment: OracleAlignment, view: DocumentView) -> list[str]:
    """Reference sentences whose oracle sentence lies inside the view,
    in reference order."""
    members = set(view.sentence_indices)
    return [
        doc.reference[ref_idx]
        for ref_idx, doc_idx, _ in alignment.pairs
        if doc_idx in members
    ]


def _enforced_view(doc: Document, alignment: OracleAlignment, config: SamplingConfig, view_index: int) -> DocumentView:
    """Resample until the view holds an oracle sentence, then fall back to
    injecting one (replacing a uniformly chosen index, keeping the size)."""
    oracle_indices = alignment.doc_indices()
    indices = _draw_indices(doc, config, view_index)
    attempt = 0
    while not oracle_indices & set(indices) and attempt < _MAX_RESAMPLE_ATTEMPTS:
        attempt += 1
        indices = _draw_indices(doc, config, view_index, tag=f"retry{attempt}")
    if not oracle_indices & set(indices):
        rng = random.Random(_stream_seed(config.seed, doc.id, view_index, "inject"))
        injected = rng.choice(sorted(oracle_indices))
        victim = rng.randrange(len(indices))
        indices = tuple(sorted(set(indices[:victim] + indices[victim + 1 :]) | {injected}))
    return DocumentView(doc.id, view_index, indices, config.seed)


def build_view_dataset(
    documents: Iterable[Document], config: SamplingConfig
) -> list[ViewRecord]:
    """Sample views_per_doc views per document and pair them with their
    reference views. With enforce_oracle every record has a nonempty target."""
    records: list[ViewRecord] = []
    for doc in documents:
        alignment: Optional[OracleAlignment] = None
        if doc.reference:
            alignment = align_oracle(doc)
        elif config.enforce_oracle:
            raise ValueError(
                f"document {doc.id!r} has no reference; cannot enforce oracle views"
            )
        for view_index in range(config.views_per_doc):
            if config.enforce_oracle:
                view = _enforced_view(doc, alignment, config, view_index)
            else:
                view = sample_view(doc, config, view_index)
            target = (
                " ".join(reference_view(doc, alignment, view)) if alignment else ""
            )
            records.append(
                ViewRecord(view=view, source_text=view.text(doc), target_text=target)
            )
    return records


def coverage_stats(
    documents: Iterable[Document], sample_factor: float, views_per_doc: int, seed: int
) -> tuple[float, float]:
    """(mean % of distinct oracle indices covered by the sampled views,
    mean sentences per view)."""
    config = SamplingConfig(
        sample_factor=sample_factor, views_per_doc=views_per_doc, seed=seed
    )
    coverages = []
    sentence_counts = []
    for doc in documents:
        oracle_indices = align_oracle(doc).doc_indices()
        sampled: set[int] = set()
        for view_index in range(views_per_doc):
            view = sample_view(doc, config, view_index)
            sampled.update(view.sentence_indices)
            sentence_counts.append(len(view.sentence_indices))
        coverages.append(len(oracle_indices & sampled) / len(oracle_indices))
    if not coverages:
        return 0.0, 0.0
    return (
        100.0 * sum(coverages) / len(coverages),
        sum(sentence_counts) / len(sentence_counts),
    )


def write_view_dataset(records: Iterable[ViewRecord], path: str | Path) -> None:
    """Export records as JSONL: doc_id, view_index, sentence_indices,
    source, target."""
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(
                json.dumps(
                    {
                        "doc_id": record.view.doc_id,
                        "view_index": record.view.view_index,
                        "sentence_indices": list(record.view.sentence_indices),
                        "source": record.source_text,
                        "target": record.target_text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
