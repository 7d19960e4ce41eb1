"""Deterministic tokenization and text similarity metrics.

Word tokenization, sentence splitting, ROUGE-1/2/L F1 and word-level
normalized Levenshtein distance. All functions are pure; token sequences
are plain lists of lowercase strings.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from . import porter

TokenSeq = list[str]

_WORD_RE = re.compile(r"[a-z0-9]+")

# Abbreviations that do not terminate a sentence even before a capital.
_ABBREVIATIONS = frozenset(
    """mr mrs ms dr prof rev st jr sr vs etc al fig figs eq eqs sec secs
    no vol vols inc ltd co corp dept univ est approx ca cf resp e.g i.e""".split()
)

_BOUNDARY_RE = re.compile(r"[.!?]+[\"')\]]*\s+(?=[\"'(\[]*[A-Z0-9])")


def tokenize_words(text: str, stem: bool = False) -> TokenSeq:
    """Lowercase alphanumeric tokens; Porter-stemmed when `stem` is set."""
    tokens = _WORD_RE.findall(text.lower())
    if stem:
        tokens = [porter.stem(t) for t in tokens]
    return tokens


def count_words(text: str) -> int:
    """Summary length in words: unstemmed token count."""
    return len(_WORD_RE.findall(text.lower()))


def _last_word(text: str) -> str:
    trimmed = text.rstrip().rstrip(".!?\"')]")
    match = re.search(r"[\w.]+$", trimmed)
    return match.group(0).lower().rstrip(".") if match else ""


def split_sentences(text: str) -> list[str]:
    """Split text into sentences on terminal punctuation.

    Rule-based: a boundary is [.!?] plus trailing quotes/brackets, followed
    by whitespace and an uppercase letter or digit. Abbreviations such as
    "Dr." and decimal numbers do not split. Concatenating the results
    recovers the input modulo whitespace.
    """
    pieces = []
    start = 0
    for match in _BOUNDARY_RE.finditer(text):
        candidate = text[start : match.end()]
        if _last_word(candidate) in _ABBREVIATIONS:
            continue
        pieces.append(candidate)
        start = match.end()
    pieces.append(text[start:])
    return [p.strip() for p in pieces if p.strip()]


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _score(overlap: int, n_candidate: int, n_reference: int) -> RougeScore:
    precision = overlap / n_candidate if n_candidate else 0.0
    recall = overlap / n_reference if n_reference else 0.0
    return RougeScore(precision, recall, _f1(precision, recall))


def _ngrams(tokens: TokenSeq, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: TokenSeq, reference: TokenSeq, n: int) -> RougeScore:
    """Clipped n-gram overlap precision/recall/F1."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    cand = _ngrams(candidate, n)
    ref = _ngrams(reference, n)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    return _score(overlap, sum(cand.values()), sum(ref.values()))


def _lcs_length(a: TokenSeq, b: TokenSeq) -> int:
    if not a or not b:
        return 0
    row = [0] * (len(b) + 1)
    for x in a:
        prev = 0
        for j, y in enumerate(b, start=1):
            cur = row[j]
            row[j] = prev + 1 if x == y else max(row[j], row[j - 1])
            prev = cur
    return row[len(b)]


def rouge_l(candidate: TokenSeq, reference: TokenSeq) -> RougeScore:
    """LCS-based F1 over whole token sequences."""
    lcs = _lcs_length(candidate, reference)
    return _score(lcs, len(candidate), len(reference))


def _lcs_union_indices(reference: TokenSeq, candidate: TokenSeq) -> set[int]:
    """Reference-token indices hit by an LCS against the candidate."""
    m, n = len(reference), len(candidate)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if reference[i - 1] == candidate[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    hits = set()
    i, j = m, n
    while i > 0 and j > 0:
        if reference[i - 1] == candidate[j - 1]:
            hits.add(i - 1)
            i -= 1
            j -= 1
        elif table[i - 1][j] >= table[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return hits


def rouge_l_summary(
    candidate_sentences: list[TokenSeq], reference_sentences: list[TokenSeq]
) -> RougeScore:
    """Summary-level ROUGE-L: union-LCS per reference sentence, clipped.

    Variant of rouge_l for sentence-split summaries; each reference
    sentence takes the union of its LCS hits against every candidate
    sentence, and hit tokens are clipped by candidate token counts.
    """
    cand_counts = Counter(t for sent in candidate_sentences for t in sent)
    n_candidate = sum(len(s) for s in candidate_sentences)
    n_reference = sum(len(s) for s in reference_sentences)
    budget = Counter(cand_counts)
    overlap = 0
    for ref_sent in reference_sentences:
        union: set[int] = set()
        for cand_sent in candidate_sentences:
            union |= _lcs_union_indices(ref_sent, cand_sent)
        for idx in union:
            token = ref_sent[idx]
            if budget[token] > 0:
                budget[token] -= 1
                overlap += 1
    return _score(overlap, n_candidate, n_reference)


def normalized_levenshtein(a: TokenSeq, b: TokenSeq) -> float:
    """Word-level edit distance divided by max length; 0 for two empties."""
    if not a and not b:
        return 0.0
    if not a or not b:
        return 1.0
    row = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        prev = row[0]
        row[0] = i
        for j, y in enumerate(b, start=1):
            cur = row[j]
            row[j] = min(row[j] + 1, row[j - 1] + 1, prev + (x != y))
            prev = cur
    return row[len(b)] / max(len(a), len(b))
