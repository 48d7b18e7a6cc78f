"""Greedy inference over a line file, matching the harness adapter protocol.

Exactly one output line is written per input line.  Input characters
missing from the checkpoint vocabulary are encoded as UNK; UNK never
appears in the output text.
"""

from __future__ import annotations

from pathlib import Path

import torch

from .data import CharVocab, pad_batch, read_lines
from .spec import ModelSpec
from .train import build_model


class CheckpointError(ValueError):
    """Unreadable or inconsistent checkpoint."""


def load_checkpoint(path: str | Path):
    try:
        doc = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as exc:
        raise CheckpointError(f"cannot load checkpoint {path}: {exc}") from exc
    try:
        spec = ModelSpec.from_dict(doc["spec"])
        src_vocab = CharVocab.from_dict(doc["src_vocab"])
        tgt_vocab = CharVocab.from_dict(doc["tgt_vocab"])
        model = build_model(spec, len(src_vocab), len(tgt_vocab))
        model.load_state_dict(doc["model_state"])
    except (KeyError, ValueError, RuntimeError) as exc:
        raise CheckpointError(f"checkpoint {path} does not match its model spec: {exc}") from exc
    model.eval()
    return model, spec, src_vocab, tgt_vocab, doc


def predict(
    ckpt_path: str | Path,
    input_path: str | Path,
    output_path: str | Path,
    batch_size: int = 128,
) -> int:
    """Write one hypothesis per input line; returns the line count."""
    model, spec, src_vocab, tgt_vocab, _doc = load_checkpoint(ckpt_path)
    hp = spec.resolved()
    lines = read_lines(input_path)
    out_path = Path(output_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        for start in range(0, len(lines), batch_size):
            chunk = lines[start : start + batch_size]
            src = pad_batch([src_vocab.encode(line, hp["max_len"]) for line in chunk])
            for ids in model.greedy_decode(src):
                fh.write(tgt_vocab.decode(ids) + "\n")
    return len(lines)
