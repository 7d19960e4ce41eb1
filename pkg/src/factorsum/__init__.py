"""Factorized summarization: sampled document views composed under budget and content guidance."""

__version__ = "0.1.0"
