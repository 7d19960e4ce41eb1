"""Batch beam-search generation of summary views.

Reads document views (doc_id, view_index, source), writes the engine's
summary-view contract (doc_id, view_index, text). Views that fail to
decode, or decode to empty text, become error records in a sidecar
`<output>.errors.jsonl` and the run continues.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import torch

from .config import AdapterConfig
from .data import encode_sources, load_view_dataset
from .model import load_or_create

logger = logging.getLogger(__name__)


@dataclass
class GenerateResult:
    output_path: Path
    n_views: int
    n_errors: int

    @property
    def errors_path(self) -> Path:
        return self.output_path.with_suffix(".errors.jsonl")


def generate_views(
    document_views: str | Path, config: AdapterConfig, output_path: str | Path
) -> GenerateResult:
    """Generate one summary view per input view via beam search."""
    views = load_view_dataset(document_views, require_targets=False)
    model, tokenizer, _ = load_or_create(config)
    model.eval()
    torch.manual_seed(config.seed)

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    errors_path = output_path.with_suffix(".errors.jsonl")

    written = errors = 0
    with open(output_path, "w", encoding="utf-8") as out, open(
        errors_path, "w", encoding="utf-8"
    ) as err:
        for start in range(0, len(views), config.batch_size):
            batch = views[start : start + config.batch_size]
            try:
                texts = _decode_batch(model, tokenizer, batch, config)
            except Exception as exc:  # failed batch: record every view, keep going
                logger.warning("decode failure at views %d..%d: %s", start, start + len(batch), exc)
                texts = [None] * len(batch)
            for view, text in zip(batch, texts):
                record = {"doc_id": view.doc_id, "view_index": view.view_index}
                if text:
                    out.write(json.dumps({**record, "text": text}, ensure_ascii=False) + "\n")
                    written += 1
                else:
                    err.write(
                        json.dumps({**record, "error": "empty or failed decode"}) + "\n"
                    )
                    errors += 1
    if errors == 0:
        errors_path.unlink()
    return GenerateResult(output_path=output_path, n_views=written, n_errors=errors)


def _decode_batch(model, tokenizer, batch, config):
    input_ids, attention_mask = encode_sources(
        tokenizer, [v.source for v in batch], config.max_source_length
    )
    with torch.no_grad():
        generated = model.generate(
            input_ids=input_ids,
            attention_mask=attention_mask,
            num_beams=config.beams,
            length_penalty=config.length_penalty,
            max_new_tokens=config.max_target_length,
            min_new_tokens=2,
            early_stopping=True,
        )
    return [text.strip() for text in tokenizer.batch_decode(generated, skip_special_tokens=True)]
