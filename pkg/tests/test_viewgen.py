import json
import logging

import pytest

from factorsum.corpus import Document
from factorsum.sampler import SamplingConfig, align_oracle, reference_view, sample_view
from factorsum.viewgen import (
    SummaryView,
    ensemble_provider,
    extractive_provider,
    file_provider,
    load_advisor_table,
    oracle_provider,
    write_summary_views,
)


def make_doc(n=10, doc_id="d", with_ref=True):
    sentences = tuple(f"Body sentence {i} carries tokens a{i} b{i} c{i}." for i in range(n))
    reference = None
    if with_ref:
        reference = (sentences[2], sentences[5]) if n > 5 else (sentences[-1],)
    return Document(id=doc_id, sentences=sentences, reference=reference)


def views_of(doc, k=4, seed=0):
    config = SamplingConfig(sample_factor=0.4, views_per_doc=k, seed=seed)
    return [sample_view(doc, config, i) for i in range(k)]


class TestFileProvider:
    def test_lookup_all_for_doc(self, tmp_path):
        path = tmp_path / "v.jsonl"
        views = [SummaryView("X", i, f"text number {i}.", "external-model") for i in range(20)]
        write_summary_views(views, path)
        provider = file_provider(path)
        served = provider.views_for(make_doc(doc_id="X"), None)
        assert len(served) == 20
        assert [v.text for v in served] == [v.text for v in views]

    def test_round_trip_byte_exact(self, tmp_path):
        path = tmp_path / "v.jsonl"
        original = [SummaryView("X", 0, 'quotes "and" unicode: café.', "external-model")]
        write_summary_views(original, path)
        provider = file_provider(path)
        assert provider.views_for(make_doc(doc_id="X"), None)[0].text == original[0].text

    def test_missing_key_named(self, tmp_path):
        path = tmp_path / "v.jsonl"
        write_summary_views([SummaryView("X", 0, "t.", "external-model")], path)
        provider = file_provider(path)
        doc = make_doc(doc_id="Y")
        with pytest.raises(KeyError, match="Y"):
            provider.views_for(doc, None)
        with pytest.raises(KeyError, match="view_index"):
            provider.views_for(make_doc(doc_id="X"), views_of(make_doc(doc_id="X"), k=3))

    def test_lookup_by_view_index(self, tmp_path):
        doc = make_doc(doc_id="X")
        doc_views = views_of(doc, k=3)
        path = tmp_path / "v.jsonl"
        write_summary_views(
            [SummaryView("X", v.view_index, f"stored {v.view_index}.", "external-model") for v in doc_views],
            path,
        )
        served = file_provider(path).views_for(doc, doc_views)
        assert [v.text for v in served] == ["stored 0.", "stored 1.", "stored 2."]

    def test_duplicate_key_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        with open(path, "w") as f:
            for _ in range(2):
                f.write(json.dumps({"doc_id": "X", "view_index": 0, "text": "t."}) + "\n")
        with pytest.raises(ValueError, match="duplicate"):
            file_provider(path)

    def test_missing_field_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        path.write_text(json.dumps({"doc_id": "X", "view_index": 0}) + "\n")
        with pytest.raises(ValueError, match="text"):
            file_provider(path)


class TestExtractiveProvider:
    def test_lead_k_of_view(self):
        doc = make_doc(10)
        provider = extractive_provider(2)
        [view] = views_of(doc, k=1)
        [summary] = provider.views_for(doc, [view])
        expected = " ".join(view.sentences(doc)[:2])
        assert summary.text == expected
        assert summary.provenance == "extractive"

    def test_truncates_short_views(self):
        doc = make_doc(3)
        view = sample_view(doc, SamplingConfig(sample_factor=0.1, seed=0), 0)
        assert len(view.sentence_indices) == 1
        [summary] = extractive_provider(3).views_for(doc, [view])
        assert summary.text == view.sentences(doc)[0]

    def test_k_validation(self):
        with pytest.raises(ValueError):
            extractive_provider(0)


class TestOracleProvider:
    def test_views_equal_reference_views(self):
        doc = make_doc(10)
        doc_views = views_of(doc, k=6)
        provider = oracle_provider()
        served = provider.views_for(doc, doc_views)
        alignment = align_oracle(doc)
        expected = []
        for view in doc_views:
            sentences = reference_view(doc, alignment, view)
            if sentences:
                expected.append((view.view_index, " ".join(sentences)))
        assert [(v.view_index, v.text) for v in served] == expected

    def test_empty_reference_views_skipped(self):
        doc = Document(
            id="d",
            sentences=tuple(f"q{i} r{i} s{i}." for i in range(20)),
            reference=("q0 r0 s0.",),
        )
        config = SamplingConfig(sample_factor=0.1, views_per_doc=10, seed=0)
        doc_views = [sample_view(doc, config, i) for i in range(10)]
        served = oracle_provider().views_for(doc, doc_views)
        kept = {v.view_index for v in served}
        for view in doc_views:
            assert (0 in view.sentence_indices) == (view.view_index in kept)

    def test_requires_reference(self):
        with pytest.raises(ValueError, match="reference"):
            oracle_provider().views_for(make_doc(with_ref=False), views_of(make_doc()))


class TestEnsembleProvider:
    def write_advisor(self, path, table):
        with open(path, "w") as f:
            for doc_id, summary in table.items():
                f.write(json.dumps({"doc_id": doc_id, "summary": summary}) + "\n")

    def test_union_of_models(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        self.write_advisor(a, {"X": "model a says this."})
        self.write_advisor(b, {"X": "model b says that."})
        provider = ensemble_provider([a, b])
        served = provider.views_for(make_doc(doc_id="X"), None)
        assert [v.text for v in served] == ["model a says this.", "model b says that."]
        assert [v.view_index for v in served] == [0, 1]
        assert all(v.provenance == "ensemble" for v in served)

    def test_missing_doc_skipped_with_warning(self, tmp_path, caplog):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        self.write_advisor(a, {"X": "covers x."})
        self.write_advisor(b, {"Y": "covers y."})
        provider = ensemble_provider([a, b])
        with caplog.at_level(logging.WARNING):
            served = provider.views_for(make_doc(doc_id="X"), None)
        assert len(served) == 1
        assert "skipping" in caplog.text

    def test_needs_at_least_one_path(self):
        with pytest.raises(ValueError):
            ensemble_provider([])


def test_load_advisor_table_validates_fields(tmp_path):
    path = tmp_path / "a.jsonl"
    path.write_text(json.dumps({"doc_id": "X"}) + "\n")
    with pytest.raises(ValueError, match="summary"):
        load_advisor_table(path)


def test_oracle_guided_dominates_extractive(tmp_path):
    """Oracle views + reference guidance beat extractive lead-k views."""
    from factorsum import pipeline, toy
    from factorsum.corpus import save_corpus
    from factorsum.pipeline import RunConfig

    corpus_path = tmp_path / "toy.jsonl"
    save_corpus(toy.make_toy_corpus(n_docs=10, seed=21), corpus_path)

    def run(provider, content_mode, name):
        config = RunConfig(
            corpus_path=str(corpus_path),
            provider=provider,
            budget_mode="oracle",
            content_mode=content_mode,
            views_per_doc=10,
            out_dir=str(tmp_path / name),
            seed=2,
        )
        _, report = pipeline.run_generate(config)
        return report.r1

    assert run("oracle", "reference", "a") >= run("extractive", "none", "b")


def test_provider_substitutability(tmp_path):
    """Every provider drives the optimizer to a valid composition."""
    from factorsum import optimizer
    from factorsum.optimizer import Guidance

    doc = make_doc(12, doc_id="X")
    doc_views = views_of(doc, k=5)
    views_path = tmp_path / "v.jsonl"
    write_summary_views(
        [SummaryView("X", v.view_index, v.text(doc), "external-model") for v in doc_views],
        views_path,
    )
    advisor_path = tmp_path / "adv.jsonl"
    with open(advisor_path, "w") as f:
        f.write(json.dumps({"doc_id": "X", "summary": doc.sentences[0]}) + "\n")

    providers = [
        file_provider(views_path),
        extractive_provider(2),
        oracle_provider(),
        ensemble_provider([advisor_path]),
    ]
    guidance = Guidance(budget_words=20.0, beta=0.0)
    for provider in providers:
        views = provider.views_for(doc, doc_views if provider.needs_document_views else None)
        pool = optimizer.build_candidate_pool(views)
        summary = optimizer.greedy_compose(pool, guidance)
        assert summary.energy <= guidance.alpha
        for i, first in enumerate(summary.selected):
            for second in summary.selected[i + 1 :]:
                from factorsum.textmetrics import normalized_levenshtein, tokenize_words

                assert (
                    normalized_levenshtein(
                        tokenize_words(first.text), tokenize_words(second.text)
                    )
                    >= guidance.redundancy_threshold
                )
