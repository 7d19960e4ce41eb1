"""Model construction, checkpoint save/load."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from transformers import (
    AutoModelForSeq2SeqLM,
    AutoTokenizer,
    BartConfig,
    BartForConditionalGeneration,
    PreTrainedTokenizerFast,
)

from .config import AdapterConfig

STATE_FILE = "adapter_state.json"

# from-scratch presets for offline runs; real runs pass a hub name instead
PRESETS = {
    "tiny": dict(d_model=64, layers=1, heads=2, ffn=128),
    "small": dict(d_model=128, layers=2, heads=4, ffn=256),
}


def _fresh_model(preset: str, tokenizer: PreTrainedTokenizerFast, config: AdapterConfig):
    shape = PRESETS[preset]
    max_positions = max(config.max_source_length, config.max_target_length) + 8
    bart_config = BartConfig(
        vocab_size=len(tokenizer),
        d_model=shape["d_model"],
        encoder_layers=shape["layers"],
        decoder_layers=shape["layers"],
        encoder_attention_heads=shape["heads"],
        decoder_attention_heads=shape["heads"],
        encoder_ffn_dim=shape["ffn"],
        decoder_ffn_dim=shape["ffn"],
        max_position_embeddings=max_positions,
        pad_token_id=tokenizer.pad_token_id,
        bos_token_id=tokenizer.bos_token_id,
        eos_token_id=tokenizer.eos_token_id,
        decoder_start_token_id=tokenizer.eos_token_id,
        forced_eos_token_id=tokenizer.eos_token_id,
        dropout=0.1,
    )
    return BartForConditionalGeneration(bart_config)


def load_or_create(
    config: AdapterConfig, tokenizer: Optional[PreTrainedTokenizerFast] = None
):
    """Resolve config.checkpoint to (model, tokenizer, state).

    A directory resumes a saved checkpoint; a preset name builds a fresh
    randomly initialized model around the provided tokenizer; anything
    else is treated as a pretrained hub identifier.
    """
    source = config.checkpoint
    path = Path(source)
    if path.is_dir():
        model = AutoModelForSeq2SeqLM.from_pretrained(path)
        tokenizer = AutoTokenizer.from_pretrained(path)
        state_path = path / STATE_FILE
        state = json.loads(state_path.read_text()) if state_path.exists() else {"steps": 0, "loss_history": []}
        return model, tokenizer, state
    if source in PRESETS:
        if tokenizer is None:
            raise ValueError(f"preset {source!r} needs a corpus-built tokenizer")
        return _fresh_model(source, tokenizer, config), tokenizer, {"steps": 0, "loss_history": []}
    model = AutoModelForSeq2SeqLM.from_pretrained(source)
    tokenizer = AutoTokenizer.from_pretrained(source)
    return model, tokenizer, {"steps": 0, "loss_history": []}


def save_checkpoint(directory: str | Path, model, tokenizer, state: dict) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(directory)
    tokenizer.save_pretrained(directory)
    (directory / STATE_FILE).write_text(json.dumps(state, indent=2))
    return directory
