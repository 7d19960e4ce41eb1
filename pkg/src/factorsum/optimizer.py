"""Greedy summary composition under budget and content guidance.

A composed summary is built from a pool of candidate sentences (split
from summary views). Each step adds the candidate that minimizes

    energy(S) = alpha * (words(S) / budget - 1)^2 - beta * ROUGE1(S, content)

subject to a non-redundancy constraint (word-level normalized Levenshtein
distance to every selected sentence must be >= the threshold) and strict
energy improvement over the best summary so far.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

from .corpus import Document
from .textmetrics import (
    count_words,
    normalized_levenshtein,
    rouge_n,
    split_sentences,
    tokenize_words,
)
from .viewgen import SummaryView

_CONTENT_METRICS = ("f1", "recall", "precision")


@dataclass(frozen=True)
class Guidance:
    budget_words: float
    content: Optional[str] = None
    alpha: float = 1.0
    beta: float = 1.0
    redundancy_threshold: float = 0.4
    patience: Optional[int] = None  # None: as many rounds as the pool has candidates
    content_metric: str = "f1"

    def __post_init__(self):
        if self.budget_words <= 0:
            raise ValueError(f"budget_words must be positive, got {self.budget_words}")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if not 0.0 <= self.redundancy_threshold <= 1.0:
            raise ValueError("redundancy_threshold must lie in [0, 1]")
        if self.patience is not None and self.patience < 1:
            raise ValueError("patience must be a positive integer")
        if self.content_metric not in _CONTENT_METRICS:
            raise ValueError(f"content_metric must be one of {_CONTENT_METRICS}")

    @property
    def uses_content(self) -> bool:
        return self.beta > 0 and self.content is not None


@dataclass(frozen=True)
class Candidate:
    text: str
    word_count: int
    origin: tuple[str, int, int]  # (doc_id, view_index, sentence index in view)


@dataclass(frozen=True)
class ComposedSummary:
    selected: tuple[Candidate, ...]
    total_words: int
    energy: float
    iterations: int

    @property
    def text(self) -> str:
        return " ".join(c.text for c in self.selected)


@dataclass(frozen=True)
class BudgetMode:
    kind: str  # fixed | oracle | model
    value: Optional[float] = None
    correction: float = 0.0

    def __post_init__(self):
        if self.kind not in ("fixed", "oracle", "model"):
            raise ValueError(f"unknown budget mode {self.kind!r}")
        if self.kind == "fixed" and (self.value is None or self.value <= 0):
            raise ValueError("fixed budget mode needs a positive value")


CONTENT_MODES = ("none", "lead", "model", "reference")


def candidate(text: str, origin: tuple[str, int, int] = ("", 0, 0)) -> Candidate:
    return Candidate(text=text, word_count=count_words(text), origin=origin)


def build_candidate_pool(views: Sequence[SummaryView]) -> list[Candidate]:
    """Split views into sentences; the pool is their union (exact duplicates
    deduplicated, first occurrence kept; empty sentences dropped)."""
    pool: list[Candidate] = []
    seen: set[str] = set()
    for view in views:
        for sent_index, sentence in enumerate(split_sentences(view.text)):
            if sentence in seen:
                continue
            words = count_words(sentence)
            if words == 0:
                continue
            seen.add(sentence)
            pool.append(
                Candidate(
                    text=sentence,
                    word_count=words,
                    origin=(view.doc_id, view.view_index, sent_index),
                )
            )
    return pool


def extrinsic_energy(summary_texts: Sequence[str], guidance: Guidance) -> float:
    """Energy of a summary given as its list of sentence texts."""
    joined = " ".join(summary_texts)
    words = count_words(joined)
    energy = guidance.alpha * (words / guidance.budget_words - 1.0) ** 2
    if guidance.uses_content:
        score = rouge_n(
            tokenize_words(joined, stem=True),
            tokenize_words(guidance.content, stem=True),
            1,
        )
        energy -= guidance.beta * getattr(score, guidance.content_metric)
    return energy


def is_redundant(current: Sequence[Candidate], cand: Candidate, threshold: float) -> bool:
    """True iff the candidate sits within the Levenshtein threshold of any
    already selected sentence."""
    cand_tokens = tokenize_words(cand.text)
    return any(
        normalized_levenshtein(tokenize_words(sel.text), cand_tokens) < threshold
        for sel in current
    )


class _EnergyState:
    """Incremental energy evaluation for a growing summary.

    Tracks unstemmed word count and, when content guidance is active, the
    stemmed unigram multiset and clipped overlap with the content tokens.
    Incremental values match extrinsic_energy exactly because tokenization
    distributes over space-joined texts.
    """

    def __init__(self, guidance: Guidance):
        self.guidance = guidance
        self.words = 0
        self.stem_counts: Counter = Counter()
        self.stem_total = 0
        self.overlap = 0
        self.content_counts: Counter = Counter()
        self.content_total = 0
        if guidance.uses_content:
            tokens = tokenize_words(guidance.content, stem=True)
            self.content_counts = Counter(tokens)
            self.content_total = len(tokens)

    def energy_with(self, cand: Candidate, profile: tuple[Counter, int]) -> float:
        words = self.words + cand.word_count
        energy = self.guidance.alpha * (words / self.guidance.budget_words - 1.0) ** 2
        if self.guidance.uses_content:
            counts, total = profile
            overlap = self.overlap
            for token, count in counts.items():
                have = self.stem_counts[token]
                cap = self.content_counts[token]
                overlap += min(have + count, cap) - min(have, cap)
            denom_p = self.stem_total + total
            precision = overlap / denom_p if denom_p else 0.0
            recall = overlap / self.content_total if self.content_total else 0.0
            if precision + recall > 0:
                f1 = 2 * precision * recall / (precision + recall)
            else:
                f1 = 0.0
            metric = {"f1": f1, "recall": recall, "precision": precision}
            energy -= self.guidance.beta * metric[self.guidance.content_metric]
        return energy

    def accept(self, cand: Candidate, profile: tuple[Counter, int]) -> None:
        counts, total = profile
        if self.guidance.uses_content:
            for token, count in counts.items():
                have = self.stem_counts[token]
                cap = self.content_counts[token]
                self.overlap += min(have + count, cap) - min(have, cap)
        self.words += cand.word_count
        self.stem_counts.update(counts)
        self.stem_total += total


def _stem_profile(cand: Candidate) -> tuple[Counter, int]:
    tokens = tokenize_words(cand.text, stem=True)
    return Counter(tokens), len(tokens)


def greedy_compose(
    pool: Sequence[Candidate],
    guidance: Guidance,
    literal_pseudocode: bool = False,
) -> ComposedSummary:
    """Greedily select candidates minimizing the extrinsic energy.

    Default semantics: a pick is retained only when it is non-redundant
    and strictly lowers the energy of the best summary found so far.
    Redundant picks leave the pool without touching the patience counter;
    non-improving picks are discarded and count against patience.

    With literal_pseudocode the working summary also keeps non-improving
    picks (and only those picks count against patience), mirroring a
    published pseudocode variant kept for comparison; the returned summary
    is still the best one seen.
    """
    remaining = [(cand, _stem_profile(cand)) for cand in pool]
    state = _EnergyState(guidance)
    working: list[Candidate] = []
    working_tokens: list[list[str]] = []
    best: list[Candidate] = []
    best_energy = extrinsic_energy([], guidance)
    patience = guidance.patience if guidance.patience is not None else len(remaining)
    no_improve = 0
    iterations = 0

    while remaining and no_improve <= patience:
        pick_pos = 0
        pick_energy = state.energy_with(*remaining[0])
        for pos in range(1, len(remaining)):
            energy = state.energy_with(*remaining[pos])
            if energy < pick_energy:
                pick_pos, pick_energy = pos, energy
        pick, pick_profile = remaining.pop(pick_pos)
        iterations += 1

        pick_tokens = tokenize_words(pick.text)
        redundant = any(
            normalized_levenshtein(tokens, pick_tokens) < guidance.redundancy_threshold
            for tokens in working_tokens
        )

        if literal_pseudocode:
            if pick_energy > best_energy:
                no_improve += 1
                working.append(pick)
                working_tokens.append(pick_tokens)
                state.accept(pick, pick_profile)
            elif not redundant:
                no_improve = 0
                working.append(pick)
                working_tokens.append(pick_tokens)
                state.accept(pick, pick_profile)
                best = list(working)
                best_energy = pick_energy
            continue

        if redundant:
            continue
        if pick_energy < best_energy:
            working.append(pick)
            working_tokens.append(pick_tokens)
            state.accept(pick, pick_profile)
            best = list(working)
            best_energy = pick_energy
            no_improve = 0
        else:
            no_improve += 1

    texts = [c.text for c in best]
    return ComposedSummary(
        selected=tuple(best),
        total_words=sum(c.word_count for c in best),
        energy=extrinsic_energy(texts, guidance),
        iterations=iterations,
    )


def make_budget(
    mode: BudgetMode, doc: Document, advisor: Optional[dict[str, str]] = None
) -> float:
    """Effective budget in words: per-mode base plus the additive correction."""
    if mode.kind == "fixed":
        base = float(mode.value)
    elif mode.kind == "oracle":
        if not doc.reference:
            raise ValueError(f"oracle budget: document {doc.id!r} has no reference")
        base = float(count_words(doc.reference_text))
    else:  # model
        if advisor is None or doc.id not in advisor:
            raise ValueError(f"model budget: no advisor summary for doc_id {doc.id!r}")
        base = float(count_words(advisor[doc.id]))
    budget = base + mode.correction
    if budget <= 0:
        raise ValueError(
            f"effective budget for doc {doc.id!r} is {budget}; must be positive"
        )
    return budget


def make_content(
    mode: str,
    doc: Document,
    budget: float,
    advisor: Optional[dict[str, str]] = None,
) -> Optional[str]:
    """Content guidance text for a document, or None."""
    if mode == "none":
        return None
    if mode == "lead":
        words = 0
        for k, sentence in enumerate(doc.sentences, start=1):
            words += count_words(sentence)
            if words >= budget:
                return " ".join(doc.sentences[:k])
        return doc.text
    if mode == "model":
        if advisor is None or doc.id not in advisor:
            raise ValueError(f"model content: no advisor summary for doc_id {doc.id!r}")
        return advisor[doc.id]
    if mode == "reference":
        if not doc.reference:
            raise ValueError(f"reference content: document {doc.id!r} has no reference")
        return doc.reference_text
    raise ValueError(f"unknown content mode {mode!r}")


def calibrate_budget_correction(
    system_lengths: Sequence[float], target_mean: float
) -> float:
    """One calibration step: the additive gap between target and observed means."""
    if not system_lengths:
        raise ValueError("calibration needs at least one system summary length")
    return target_mean - sum(system_lengths) / len(system_lengths)


def calibrate_correction(
    run_fn: Callable[[float], Sequence[float]],
    target_mean: float,
    max_rounds: int = 5,
    tolerance: float = 2.0,
    initial: float = 0.0,
) -> tuple[float, list[tuple[float, float]]]:
    """Iteratively refine the additive budget correction.

    run_fn maps a correction to the system summary lengths it produces.
    Returns the final correction and a (correction, mean length) history;
    stops once the mean gap is within tolerance or max_rounds elapse.
    """
    correction = initial
    history: list[tuple[float, float]] = []
    for _ in range(max_rounds):
        lengths = run_fn(correction)
        mean = sum(lengths) / len(lengths)
        history.append((correction, mean))
        if abs(target_mean - mean) <= tolerance:
            break
        correction += calibrate_budget_correction(lengths, target_mean)
    return correction, history


def reorder_by_guidance(summary: ComposedSummary, guidance_text: str) -> ComposedSummary:
    """Stable-sort the selected candidates by the index of their best-matching
    guidance sentence (ROUGE-1 + ROUGE-2 F1, smallest index on ties)."""
    if not guidance_text.strip():
        raise ValueError("guidance_text must be nonempty")
    guidance_tokens = [
        tokenize_words(s, stem=True) for s in split_sentences(guidance_text)
    ]

    def oracle_index(cand: Candidate) -> int:
        tokens = tokenize_words(cand.text, stem=True)
        best_index, best_score = 0, -1.0
        for index, sent_tokens in enumerate(guidance_tokens):
            score = (
                rouge_n(tokens, sent_tokens, 1).f1 + rouge_n(tokens, sent_tokens, 2).f1
            )
            if score > best_score:
                best_index, best_score = index, score
        return best_index

    reordered = tuple(sorted(summary.selected, key=oracle_index))
    return replace(summary, selected=reordered)
