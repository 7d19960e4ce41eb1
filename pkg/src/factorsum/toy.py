"""Synthetic corpora for experiments and tests.

Documents open with boilerplate lead sentences drawn from a filler
vocabulary, followed by a body mixing noise sentences with verbatim
"fact" sentences from a small global pool. References are lightly noised
copies of the document's facts, so oracle alignment is crisp and lead-k
baselines are weak by construction.
"""

from __future__ import annotations

import random

from .corpus import Document

_FILLER_SYLLABLES = ("zor", "quel", "fex", "vash", "jeth", "wop", "xul", "yim")
_CONTENT_SYLLABLES = ("ba", "re", "mi", "ton", "lar", "dus", "pen", "ka", "sol", "tri")


def _make_words(syllables: tuple[str, ...], count: int, rng: random.Random) -> list[str]:
    words = set()
    while len(words) < count:
        n = rng.randint(2, 3)
        words.add("".join(rng.choice(syllables) for _ in range(n)))
    return sorted(words)


def _sentence(words: list[str], length: int, rng: random.Random) -> str:
    tokens = [rng.choice(words) for _ in range(length)]
    return " ".join(tokens).capitalize() + "."


def _noised_copy(sentence: str, words: list[str], rng: random.Random) -> str:
    tokens = sentence.rstrip(".").lower().split()
    out = []
    for token in tokens:
        roll = rng.random()
        if roll < 0.10:
            continue  # drop
        if roll < 0.20:
            out.append(rng.choice(words))
        else:
            out.append(token)
    if not out:
        out = tokens[:1]
    return " ".join(out).capitalize() + "."


def make_toy_corpus(
    n_docs: int = 50,
    seed: int = 0,
    n_facts: int = 24,
    facts_per_doc: tuple[int, int] = (4, 8),
    sentences_per_doc: tuple[int, int] = (24, 40),
    lead_sentences: int = 3,
) -> list[Document]:
    """Deterministic synthetic corpus with references."""
    rng = random.Random(seed)
    filler_words = _make_words(_FILLER_SYLLABLES, 30, rng)
    content_words = _make_words(_CONTENT_SYLLABLES, 80, rng)
    facts = [_sentence(content_words, rng.randint(8, 12), rng) for _ in range(n_facts)]

    documents = []
    for doc_index in range(n_docs):
        n_sents = rng.randint(*sentences_per_doc)
        n_doc_facts = rng.randint(*facts_per_doc)
        doc_facts = rng.sample(facts, n_doc_facts)

        lead = [_sentence(filler_words, rng.randint(8, 12), rng) for _ in range(lead_sentences)]
        body_len = n_sents - lead_sentences
        fact_positions = sorted(rng.sample(range(body_len), n_doc_facts))
        body = []
        fact_iter = iter(doc_facts)
        positions = set(fact_positions)
        for pos in range(body_len):
            if pos in positions:
                body.append(next(fact_iter))
            else:
                body.append(_sentence(content_words, rng.randint(6, 14), rng))
        sentences = lead + body

        ordered_facts = [s for s in sentences if s in set(doc_facts)]
        reference = [_noised_copy(fact, content_words, rng) for fact in ordered_facts]

        documents.append(
            Document(
                id=f"toy-{doc_index:04d}",
                sentences=tuple(sentences),
                reference=tuple(reference),
            )
        )
    return documents


def make_toy_advisor(documents: list[Document], seed: int = 0) -> dict[str, str]:
    """Mediocre advisor: roughly half of each reference plus one noise sentence."""
    rng = random.Random(seed)
    content_words = _make_words(_CONTENT_SYLLABLES, 80, random.Random(seed))
    table = {}
    for doc in documents:
        if not doc.reference:
            continue
        keep = max(1, len(doc.reference) // 2)
        parts = list(doc.reference[:keep])
        parts.append(_sentence(content_words, rng.randint(6, 12), rng))
        table[doc.id] = " ".join(parts)
    return table
