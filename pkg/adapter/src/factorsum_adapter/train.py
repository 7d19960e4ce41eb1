"""Teacher-forced fine-tuning on the view dataset.

Minimizes the negative log-likelihood of reference view targets given
their document views (the model's standard LM cross-entropy), with AdamW
and a linear learning-rate schedule.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import get_linear_schedule_with_warmup

from .config import ADAM_BETAS, ADAM_EPS, AdapterConfig
from .data import build_tokenizer, encode_batch, load_view_dataset
from .model import load_or_create, save_checkpoint

logger = logging.getLogger(__name__)


@dataclass
class TrainResult:
    checkpoint_dir: Path
    total_steps: int
    loss_history: list[float]

    @property
    def initial_loss(self) -> float:
        return self.loss_history[0]

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1]


def train(view_dataset: str | Path, config: AdapterConfig, output_dir: str | Path) -> TrainResult:
    """Run config.steps optimizer steps and save a checkpoint."""
    examples = load_view_dataset(view_dataset, require_targets=True)
    torch.manual_seed(config.seed)

    tokenizer = None
    if not Path(config.checkpoint).is_dir():
        tokenizer = build_tokenizer(
            [e.source for e in examples] + [e.target for e in examples]
        )
    model, tokenizer, state = load_or_create(config, tokenizer)
    model.train()

    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.learning_rate, betas=ADAM_BETAS, eps=ADAM_EPS
    )
    scheduler = get_linear_schedule_with_warmup(
        optimizer, num_warmup_steps=0, num_training_steps=config.steps
    )
    rng = random.Random(config.seed)

    losses = list(state.get("loss_history", []))
    start_step = int(state.get("steps", 0))
    for step in range(config.steps):
        batch = [examples[rng.randrange(len(examples))] for _ in range(config.batch_size)]
        input_ids, attention_mask, labels = encode_batch(
            tokenizer, batch, config.max_source_length, config.max_target_length
        )
        out = model(input_ids=input_ids, attention_mask=attention_mask, labels=labels)
        out.loss.backward()
        torch.nn.utils.clip_grad_norm_(model.parameters(), 1.0)
        optimizer.step()
        scheduler.step()
        optimizer.zero_grad()
        loss = out.loss.detach().item()
        losses.append(loss)
        if (step + 1) % 10 == 0 or step == 0:
            logger.info("step %d/%d loss %.4f", step + 1, config.steps, loss)

    state = {"steps": start_step + config.steps, "loss_history": losses}
    checkpoint_dir = save_checkpoint(output_dir, model, tokenizer, state)
    return TrainResult(
        checkpoint_dir=checkpoint_dir,
        total_steps=state["steps"],
        loss_history=losses,
    )
