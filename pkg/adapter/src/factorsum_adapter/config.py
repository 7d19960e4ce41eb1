"""Adapter configuration."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class AdapterConfig:
    checkpoint: str = "tiny"  # checkpoint dir, size preset, or hub model name
    max_source_length: int = 1024
    max_target_length: int = 128
    beams: int = 4
    length_penalty: float = 1.0
    learning_rate: float = 5e-5
    steps: int = 100
    batch_size: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.max_source_length < 1 or self.max_target_length < 1:
            raise ValueError("sequence lengths must be positive")
        if self.beams < 1:
            raise ValueError("beams must be >= 1")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


# AdamW settings shared by all runs
ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8
