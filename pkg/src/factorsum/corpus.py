"""Corpus ingestion: JSONL loading, empty-sample filtering, statistics.

One document per line. Articles and abstracts may ship pre-split
(`article_sentences`, `abstract_sentences`) or as raw text
(`article_text`, `abstract_text`), in which case the rule-based sentence
splitter is applied. Files ending in `.jsonl.gz` are read transparently.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Optional

from .textmetrics import count_words, split_sentences


class CorpusError(ValueError):
    """Malformed corpus input (bad JSON, missing field, duplicate id)."""


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[str, ...]
    reference: Optional[tuple[str, ...]] = None

    @property
    def text(self) -> str:
        return " ".join(self.sentences)

    @property
    def reference_text(self) -> Optional[str]:
        if self.reference is None:
            return None
        return " ".join(self.reference)


@dataclass(frozen=True)
class CorpusStats:
    n_documents: int
    mean_summary_sentences: float
    mean_summary_words: float
    mean_document_sentences: float


def _open(path: str | Path, mode: str = "rt") -> IO[str]:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode, encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def _clean_sentences(value, field: str, line_no: int) -> tuple[str, ...]:
    if isinstance(value, str):
        return tuple(split_sentences(value))
    if isinstance(value, list) and all(isinstance(s, str) for s in value):
        return tuple(s.strip() for s in value if s.strip())
    raise CorpusError(
        f"line {line_no}: field {field!r} must be a string or list of strings"
    )


def _parse_record(record: dict, split: str, line_no: int) -> Optional[Document]:
    if "article_sentences" in record:
        sentences = _clean_sentences(
            record["article_sentences"], "article_sentences", line_no
        )
    elif "article_text" in record:
        sentences = _clean_sentences(record["article_text"], "article_text", line_no)
    else:
        raise CorpusError(
            f"line {line_no}: missing required field 'article_sentences' or 'article_text'"
        )

    reference: Optional[tuple[str, ...]] = None
    has_abstract = "abstract_sentences" in record or "abstract_text" in record
    if "abstract_sentences" in record:
        reference = _clean_sentences(
            record["abstract_sentences"], "abstract_sentences", line_no
        )
    elif "abstract_text" in record:
        reference = _clean_sentences(record["abstract_text"], "abstract_text", line_no)

    # the preprocessing filter: drop empty articles and empty summaries
    if not sentences or (has_abstract and not reference):
        return None

    doc_id = str(record.get("id", f"{split}-{line_no}"))
    return Document(id=doc_id, sentences=sentences, reference=reference)


def load_corpus(path: str | Path, split: str = "train") -> list[Document]:
    """Load and filter a JSONL corpus; order of surviving documents is kept."""
    documents: list[Document] = []
    seen: set[str] = set()
    with _open(path) as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise CorpusError(f"line {line_no}: expected a JSON object")
            doc = _parse_record(record, split, line_no)
            if doc is None:
                continue
            if doc.id in seen:
                raise CorpusError(f"line {line_no}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            documents.append(doc)
    return documents


def save_corpus(documents: Iterable[Document], path: str | Path) -> None:
    """Write documents in the JSONL corpus format (round-trips load_corpus)."""
    with _open(path, "wt") as f:
        for doc in documents:
            record: dict = {"id": doc.id, "article_sentences": list(doc.sentences)}
            if doc.reference is not None:
                record["abstract_sentences"] = list(doc.reference)
            f.write(json.dumps(record, ensure_ascii=False) + "\n")


def corpus_stats(documents: list[Document]) -> CorpusStats:
    """Mean summary/document sizes; docs without references are excluded
    from the summary means."""
    with_ref = [d for d in documents if d.reference]
    n_ref = len(with_ref)
    return CorpusStats(
        n_documents=len(documents),
        mean_summary_sentences=(
            sum(len(d.reference) for d in with_ref) / n_ref if n_ref else 0.0
        ),
        mean_summary_words=(
            sum(count_words(d.reference_text) for d in with_ref) / n_ref
            if n_ref
            else 0.0
        ),
        mean_document_sentences=(
            sum(len(d.sentences) for d in documents) / len(documents)
            if documents
            else 0.0
        ),
    )
