"""Seq2seq view-summarizer adapter.

Trains an encoder-decoder on the engine's exported view dataset
(JSONL: doc_id, view_index, sentence_indices, source, target) and writes
summary views in the engine's file-provider contract
(JSONL: doc_id, view_index, text). All coupling to the engine is through
those files.
"""

__version__ = "0.1.0"
