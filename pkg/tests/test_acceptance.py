"""Acceptance suite.

One test per acceptance criterion; each prints a PASS/FAIL line with its
runtime so the suite doubles as a checklist (run with `pytest -s`).
"""

import itertools
import random
import time

from factorsum import pipeline, sampler, toy
from factorsum.cli import main as cli_main
from factorsum.corpus import load_corpus, save_corpus
from factorsum.optimizer import Guidance, candidate, extrinsic_energy, greedy_compose
from factorsum.pipeline import RunConfig
from factorsum.textmetrics import (
    count_words,
    normalized_levenshtein,
    rouge_l,
    rouge_n,
    tokenize_words,
)

import oracles


def _verdict(name: str, ok: bool, started: float, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f": {detail}" if detail else ""
    print(f"{status} {name} ({time.monotonic() - started:.1f}s){suffix}")
    assert ok, f"{name}{suffix}"


def test_metric_oracle_equivalence():
    """ROUGE-1/2/L and Levenshtein match brute-force oracles on 200 pairs."""
    started = time.monotonic()
    rng = random.Random(20240)
    vocab = [f"tok{i}" for i in range(14)]
    worst = 0.0
    for _ in range(200):
        a = [rng.choice(vocab) for _ in range(rng.randint(0, 20))]
        b = [rng.choice(vocab) for _ in range(rng.randint(0, 20))]
        for n in (1, 2):
            mine = rouge_n(a, b, n)
            ref_p, ref_r, ref_f = oracles.rouge_n_prf(a, b, n)
            worst = max(
                worst,
                abs(mine.precision - ref_p),
                abs(mine.recall - ref_r),
                abs(mine.f1 - ref_f),
            )
        mine_l = rouge_l(a, b)
        _, _, ref_fl = oracles.rouge_l_prf(a, b)
        worst = max(worst, abs(mine_l.f1 - ref_fl))
        worst = max(
            worst,
            abs(normalized_levenshtein(a, b) - oracles.normalized_levenshtein(a, b)),
        )
    elapsed = time.monotonic() - started
    ok = worst <= 1e-12 and elapsed < 5.0
    _verdict(
        "metric-oracle-equivalence",
        ok,
        started,
        f"max deviation {worst:.2e}, {elapsed:.2f}s",
    )


def test_coverage_law():
    """Coverage tracks 1-(1-s_f)^n_d and grows with n_d on a 200-doc corpus."""
    started = time.monotonic()
    docs = toy.make_toy_corpus(n_docs=200, seed=31, sentences_per_doc=(24, 40))
    coverages = {}
    for views_per_doc in (5, 10, 20):
        coverage, _ = sampler.coverage_stats(docs, 0.2, views_per_doc, seed=77)
        coverages[views_per_doc] = coverage
    analytic = 100.0 * (1.0 - 0.8**20)  # 98.85
    gap = abs(coverages[20] - analytic)
    monotone = coverages[5] <= coverages[10] <= coverages[20]
    elapsed = time.monotonic() - started
    ok = gap <= 2.0 and monotone and elapsed < 30.0
    _verdict(
        "coverage-law",
        ok,
        started,
        f"n_d 5/10/20 -> {coverages[5]:.1f}/{coverages[10]:.1f}/{coverages[20]:.1f}%"
        f" (analytic {analytic:.2f}%)",
    )


def test_greedy_sandwich():
    """Greedy energy sits between brute-force optimum and best singleton."""
    started = time.monotonic()
    rng = random.Random(4242)
    vocab = [f"s{i}" for i in range(10)]
    checked = 0
    for _ in range(500):
        pool = [
            candidate(" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 8))))
            for _ in range(rng.randint(1, 8))
        ]
        content = None
        beta = 0.0
        if rng.random() < 0.5:
            content = " ".join(rng.choice(vocab) for _ in range(rng.randint(4, 15)))
            beta = 1.0
        guidance = Guidance(
            budget_words=float(rng.randint(5, 40)), content=content, beta=beta
        )
        summary = greedy_compose(pool, guidance)

        brute = extrinsic_energy([], guidance)
        for r in range(1, len(pool) + 1):
            for subset in itertools.combinations(pool, r):
                brute = min(
                    brute, extrinsic_energy([c.text for c in subset], guidance)
                )
        singleton = min(extrinsic_energy([c.text], guidance) for c in pool)

        assert summary.energy >= brute - 1e-12
        assert summary.energy <= singleton + 1e-12
        for first, second in itertools.combinations(summary.selected, 2):
            assert (
                normalized_levenshtein(
                    tokenize_words(first.text), tokenize_words(second.text)
                )
                >= 0.4
            )
        checked += 1
    elapsed = time.monotonic() - started
    ok = checked == 500 and elapsed < 60.0
    _verdict("greedy-sandwich", ok, started, f"{checked} pools, {elapsed:.1f}s")


def test_budget_adherence():
    """With no content term the summary lands within one candidate of budget."""
    started = time.monotonic()
    worst = {}
    for budget in (100.0, 205.0, 648.0):
        lengths = [5 + round(25 * i / 39) for i in range(40)]
        assert sum(lengths) >= budget - max(lengths)  # enough supply to reach b
        pool = [
            candidate(" ".join(f"c{i}w{j}" for j in range(n)))
            for i, n in enumerate(lengths)
        ]
        guidance = Guidance(budget_words=budget, beta=0.0)
        summary = greedy_compose(pool, guidance)
        worst[budget] = abs(summary.total_words - budget)
        assert worst[budget] <= max(lengths), (budget, summary.total_words)
    elapsed = time.monotonic() - started
    ok = elapsed < 10.0
    _verdict(
        "budget-adherence",
        ok,
        started,
        "deviation " + ", ".join(f"b={b:g}: {d:g}" for b, d in worst.items()),
    )


def test_guidance_ordering(tmp_path):
    """Reference content guidance never hurts mean ROUGE-1 vs no guidance."""
    started = time.monotonic()
    corpus_path = tmp_path / "toy50.jsonl"
    docs = toy.make_toy_corpus(n_docs=50, seed=13)
    save_corpus(docs, corpus_path)
    target = round(sum(count_words(d.reference_text) for d in docs) / len(docs))

    def run(content_mode, out_name):
        config = RunConfig(
            corpus_path=str(corpus_path),
            provider="oracle",
            budget_mode="fixed",
            budget=float(target),
            content_mode=content_mode,
            views_per_doc=20,
            out_dir=str(tmp_path / out_name),
            seed=6,
        )
        _, report = pipeline.run_generate(config)
        return report.r1

    unguided = run("none", "fs")
    guided = run("reference", "fs_oracle")
    elapsed = time.monotonic() - started
    ok = guided >= unguided and elapsed < 120.0
    _verdict(
        "guidance-ordering",
        ok,
        started,
        f"R1 guided {guided:.4f} >= unguided {unguided:.4f}",
    )


def test_calibration_fixpoint(tmp_path):
    """Budget correction reaches the target mean within 5 rounds."""
    started = time.monotonic()
    corpus_path = tmp_path / "toy50.jsonl"
    docs = toy.make_toy_corpus(n_docs=50, seed=17)
    save_corpus(docs, corpus_path)
    target = sum(count_words(d.reference_text) for d in docs) / len(docs)

    config = RunConfig(
        corpus_path=str(corpus_path),
        provider="extractive",
        budget_mode="fixed",
        budget=max(10.0, target - 15.0),
        views_per_doc=20,
        out_dir=str(tmp_path / "calib"),
        seed=8,
    )
    correction, history = pipeline.run_calibrate(config, target_mean=target)
    final_gap = abs(history[-1][1] - target)
    elapsed = time.monotonic() - started
    ok = final_gap <= 2.0 and len(history) <= 5 and elapsed < 120.0
    _verdict(
        "calibration-fixpoint",
        ok,
        started,
        f"gap {final_gap:.2f} words after {len(history)} round(s)",
    )


def test_end_to_end_determinism(tmp_path):
    """Two generate runs with the same config and seed are byte-identical."""
    started = time.monotonic()
    corpus_path = tmp_path / "toy.jsonl"
    save_corpus(toy.make_toy_corpus(n_docs=10, seed=23), corpus_path)
    outputs = []
    for name in ("one", "two"):
        code = cli_main(
            [
                "generate",
                "--corpus", str(corpus_path),
                "--provider", "oracle",
                "--budget-mode", "oracle",
                "--content-mode", "reference",
                "--n-d", "10",
                "--seed", "99",
                "--out", str(tmp_path / name),
            ]
        )
        assert code == 0
        outputs.append(
            (
                (tmp_path / name / "summaries.jsonl").read_bytes(),
                (tmp_path / name / "report.json").read_bytes(),
            )
        )
    ok = outputs[0] == outputs[1]
    _verdict("end-to-end-determinism", ok, started, "byte-identical artifacts")
