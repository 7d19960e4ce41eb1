"""Summary-view providers.

A provider turns document views into summary views: short texts whose
sentences form the candidate pool for summary composition. The neural
summarizer stays out of process; its outputs arrive through the JSONL
file contract (`{doc_id, view_index, text}` per line).
"""

from __future__ import annotations

import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .corpus import Document
from .sampler import DocumentView, OracleAlignment, align_oracle, reference_view

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SummaryView:
    doc_id: str
    view_index: int
    text: str
    provenance: str  # external-model | extractive | oracle | ensemble


class ViewProvider(ABC):
    """Maps a document plus its sampled views to summary views.

    Implementations return one SummaryView per input view, except for
    documented skips (oracle views with an empty reference view, ensemble
    models missing a document).
    """

    @abstractmethod
    def views_for(
        self, doc: Document, doc_views: Optional[Sequence[DocumentView]]
    ) -> list[SummaryView]: ...

    @property
    def needs_document_views(self) -> bool:
        return True


def _load_jsonl(path: str | Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {line_no}: invalid JSON ({exc.msg})") from exc
    return records


class FileProvider(ViewProvider):
    """Serves summary views stored in a JSONL file keyed by (doc_id, view_index)."""

    def __init__(self, path: str | Path):
        self._views: dict[tuple[str, int], str] = {}
        for record in _load_jsonl(path):
            for field in ("doc_id", "view_index", "text"):
                if field not in record:
                    raise ValueError(f"{path}: view record missing field {field!r}")
            key = (str(record["doc_id"]), int(record["view_index"]))
            if not str(record["text"]).strip():
                raise ValueError(f"{path}: empty text for view {key}")
            if key in self._views:
                raise ValueError(f"{path}: duplicate view {key}")
            self._views[key] = str(record["text"])

    @property
    def needs_document_views(self) -> bool:
        return False

    def views_for(self, doc, doc_views=None):
        if doc_views is None:
            stored = sorted(
                (idx, text) for (d, idx), text in self._views.items() if d == doc.id
            )
            if not stored:
                raise KeyError(f"no stored summary views for doc_id {doc.id!r}")
            return [
                SummaryView(doc.id, idx, text, "external-model") for idx, text in stored
            ]
        views = []
        for doc_view in doc_views:
            key = (doc.id, doc_view.view_index)
            if key not in self._views:
                raise KeyError(f"no stored summary view for (doc_id, view_index) {key}")
            views.append(SummaryView(doc.id, doc_view.view_index, self._views[key], "external-model"))
        return views


class ExtractiveProvider(ViewProvider):
    """Lead-k of each document view; a deterministic non-neural fallback."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k

    def views_for(self, doc, doc_views):
        return [
            SummaryView(
                doc.id,
                view.view_index,
                " ".join(view.sentences(doc)[: self.k]),
                "extractive",
            )
            for view in doc_views
        ]


class OracleProvider(ViewProvider):
    """Each view's summary view is its reference view; empty ones are skipped."""

    def __init__(self):
        self._alignments: dict[str, OracleAlignment] = {}

    def _alignment(self, doc: Document) -> OracleAlignment:
        if doc.id not in self._alignments:
            if not doc.reference:
                raise ValueError(f"document {doc.id!r} has no reference summary")
            self._alignments[doc.id] = align_oracle(doc)
        return self._alignments[doc.id]

    def views_for(self, doc, doc_views):
        alignment = self._alignment(doc)
        views = []
        for view in doc_views:
            sentences = reference_view(doc, alignment, view)
            if not sentences:
                continue
            views.append(
                SummaryView(doc.id, view.view_index, " ".join(sentences), "oracle")
            )
        return views


class EnsembleProvider(ViewProvider):
    """Whole-document advisor summaries pooled as views with synthetic indices."""

    def __init__(self, paths: Sequence[str | Path]):
        if not paths:
            raise ValueError("ensemble provider needs at least one summary file")
        self._tables = [(str(path), load_advisor_table(path)) for path in paths]

    @property
    def needs_document_views(self) -> bool:
        return False

    def views_for(self, doc, doc_views=None):
        views = []
        for model_index, (path, table) in enumerate(self._tables):
            if doc.id not in table:
                logger.warning("doc %r missing from %s; skipping that model", doc.id, path)
                continue
            views.append(SummaryView(doc.id, model_index, table[doc.id], "ensemble"))
        return views


def load_advisor_table(path: str | Path) -> dict[str, str]:
    """Whole-document summaries: JSONL `{doc_id, summary}` per line."""
    table: dict[str, str] = {}
    for record in _load_jsonl(path):
        for field in ("doc_id", "summary"):
            if field not in record:
                raise ValueError(f"{path}: advisor record missing field {field!r}")
        table[str(record["doc_id"])] = str(record["summary"])
    return table


def file_provider(path: str | Path) -> FileProvider:
    return FileProvider(path)


def extractive_provider(k: int) -> ExtractiveProvider:
    return ExtractiveProvider(k)


def oracle_provider() -> OracleProvider:
    return OracleProvider()


def ensemble_provider(paths: Sequence[str | Path]) -> EnsembleProvider:
    return EnsembleProvider(paths)


def write_summary_views(views: Sequence[SummaryView], path: str | Path) -> None:
    """Export views in the summary-view JSONL contract."""
    with open(path, "w", encoding="utf-8") as f:
        for view in views:
            f.write(
                json.dumps(
                    {"doc_id": view.doc_id, "view_index": view.view_index, "text": view.text},
                    ensure_ascii=False,
                )
                + "\n"
            )
