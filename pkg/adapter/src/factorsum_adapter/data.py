"""View-dataset loading and tokenization.

The training file is the engine's export: one JSON object per line with
doc_id, view_index, source, target. Word-level tokenization over
whitespace-split surface forms keeps decoding lossless on small corpora;
hub checkpoints bring their own subword tokenizers instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import torch
from tokenizers import Tokenizer
from tokenizers.models import WordLevel
from tokenizers.pre_tokenizers import WhitespaceSplit
from transformers import PreTrainedTokenizerFast

PAD, BOS, EOS, UNK = "<pad>", "<s>", "</s>", "<unk>"


class DatasetError(ValueError):
    """Malformed view dataset (bad JSON, missing field, empty target)."""


@dataclass(frozen=True)
class ViewExample:
    doc_id: str
    view_index: int
    source: str
    target: str


def load_view_dataset(path: str | Path, require_targets: bool = True) -> list[ViewExample]:
    examples = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            for field in ("doc_id", "view_index", "source"):
                if field not in record:
                    raise DatasetError(f"line {line_no}: missing field {field!r}")
            target = str(record.get("target", ""))
            if require_targets and not target.strip():
                raise DatasetError(f"line {line_no}: empty target")
            if not str(record["source"]).strip():
                raise DatasetError(f"line {line_no}: empty source")
            examples.append(
                ViewExample(
                    doc_id=str(record["doc_id"]),
                    view_index=int(record["view_index"]),
                    source=str(record["source"]),
                    target=target,
                )
            )
    if not examples:
        raise DatasetError(f"{path}: no usable records")
    return examples


def build_tokenizer(texts: Sequence[str]) -> PreTrainedTokenizerFast:
    """Word-level tokenizer whose vocabulary is the corpus surface forms."""
    vocab = {PAD: 0, BOS: 1, EOS: 2, UNK: 3}
    for text in texts:
        for token in text.split():
            if token not in vocab:
                vocab[token] = len(vocab)
    tokenizer = Tokenizer(WordLevel(vocab, unk_token=UNK))
    tokenizer.pre_tokenizer = WhitespaceSplit()
    return PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        pad_token=PAD,
        bos_token=BOS,
        eos_token=EOS,
        unk_token=UNK,
    )


def _encode(tokenizer, texts, max_length):
    """Token ids truncated to max_length-1 with EOS appended."""
    eos = tokenizer.eos_token_id
    rows = []
    for text in texts:
        ids = tokenizer(text, add_special_tokens=False)["input_ids"]
        rows.append(ids[: max_length - 1] + [eos])
    return rows


def _pad(rows, pad_id):
    width = max(len(r) for r in rows)
    ids = torch.full((len(rows), width), pad_id, dtype=torch.long)
    mask = torch.zeros((len(rows), width), dtype=torch.long)
    for i, row in enumerate(rows):
        ids[i, : len(row)] = torch.tensor(row, dtype=torch.long)
        mask[i, : len(row)] = 1
    return ids, mask


def encode_batch(tokenizer, examples: Sequence[ViewExample], max_source: int, max_target: int):
    """(input_ids, attention_mask, labels) for a training batch; label
    padding is -100 so it is ignored by the loss."""
    input_ids, attention_mask = _pad(
        _encode(tokenizer, [e.source for e in examples], max_source),
        tokenizer.pad_token_id,
    )
    label_rows = _encode(tokenizer, [e.target for e in examples], max_target)
    labels, label_mask = _pad(label_rows, tokenizer.pad_token_id)
    labels = labels.masked_fill(label_mask == 0, -100)
    return input_ids, attention_mask, labels


def encode_sources(tokenizer, sources: Sequence[str], max_source: int):
    return _pad(_encode(tokenizer, sources, max_source), tokenizer.pad_token_id)
