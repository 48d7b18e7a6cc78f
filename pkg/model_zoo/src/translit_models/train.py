"""Training loop: seeded, checkpointed, best-model-by-validation-loss.

Writes ``last.pt``/``best.pt`` checkpoints and a ``train_log.json`` with
per-epoch train/validation losses and wall time (learning-curve data).
Losses are token-weighted means over the whole split, so they are
independent of batch partitioning.
"""

from __future__ import annotations

import json
import math
import random
import time
from pathlib import Path
from typing import Callable, Optional

import torch
import torch.nn as nn

from .data import PAD, CharVocab, batches, read_pairs
from .lstm import LstmSeq2Seq
from .spec import FROM_SCRATCH_ARCHS, ModelSpec
from .transformer import Seq2SeqTransformer

CHECKPOINT_VERSION = 1


class TrainingDiverged(RuntimeError):
    """Loss became non-finite."""


def build_model(spec: ModelSpec, src_vocab_size: int, tgt_vocab_size: int) -> nn.Module:
    hp = spec.resolved()
    if spec.arch == "lstm_attention":
        return LstmSeq2Seq(
            src_vocab_size,
            tgt_vocab_size,
            embed_dim=hp["embed_dim"],
            hidden_dim=hp["hidden_dim"],
            layers=hp["layers"],
            dropout=hp["dropout"],
            bidirectional_encoder=hp["bidirectional_encoder"],
        )
    if spec.arch in ("char_transformer", "g2p_transformer"):
        return Seq2SeqTransformer(
            src_vocab_size,
            tgt_vocab_size,
            embed_dim=hp["embed_dim"],
            heads=hp["heads"],
            layers=hp["layers"],
            hidden_dim=hp["hidden_dim"],
            dropout=hp["dropout"],
            max_len=hp["max_len"],
            uniform_init_range=hp.get("uniform_init_range"),
        )
    raise ValueError(f"{spec.arch} is not a from-scratch architecture; see pretrained module")


def _epoch_pass(
    model: nn.Module,
    spec: ModelSpec,
    pairs,
    src_vocab: CharVocab,
    tgt_vocab: CharVocab,
    criterion: nn.Module,
    optimizer: Optional[torch.optim.Optimizer],
    rng: Optional[random.Random],
) -> float:
    hp = spec.resolved()
    training = optimizer is not None
    model.train(training)
    total_loss = 0.0
    total_tokens = 0
    batch_iter = batches(
        pairs, src_vocab, tgt_vocab, hp["batch_size"], hp["max_len"],
        shuffle_rng=rng if training else None,
    )
    for src, tgt in batch_iter:
        tgt_in, gold = tgt[:, :-1], tgt[:, 1:]
        if isinstance(model, LstmSeq2Seq):
            tfp = hp["teacher_forcing_p"] if training else 1.0
            logits = model(src, tgt_in, teacher_forcing_p=tfp, rng=rng)
        else:
            logits = model(src, tgt_in)
        loss = criterion(logits.reshape(-1, logits.size(-1)), gold.reshape(-1))
        if not math.isfinite(loss.item()):
            raise TrainingDiverged(f"non-finite loss {loss.item()!r}")
        n_tokens = int((gold != PAD).sum())
        total_loss += loss.item() * n_tokens
        total_tokens += n_tokens
        if training:
            optimizer.zero_grad()
            loss.backward()
            if hp.get("grad_clip"):
                nn.utils.clip_grad_norm_(model.parameters(), hp["grad_clip"])
            optimizer.step()
    return total_loss / max(total_tokens, 1)


def train(
    spec: ModelSpec,
    train_file: str | Path,
    valid_file: str | Path,
    direction: str,
    seed: int,
    out_dir: str | Path,
    progress: Optional[Callable[[str], None]] = None,
) -> dict:
    """Train a from-scratch model; returns the training log (also written
    to ``out_dir/train_log.json``)."""
    if spec.arch not in FROM_SCRATCH_ARCHS:
        raise ValueError(f"{spec.arch} requires the pretrained extras; not trainable here")
    hp = spec.resolved()
    say = progress or (lambda _m: None)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    torch.manual_seed(seed)
    rng = random.Random(seed)

    train_pairs = read_pairs(train_file, direction)
    valid_pairs = read_pairs(valid_file, direction)
    if not train_pairs or not valid_pairs:
        raise ValueError("empty training or validation file")
    src_vocab = CharVocab.build(s for s, _ in train_pairs)
    tgt_vocab = CharVocab.build(t for _, t in train_pairs)

    model = build_model(spec, len(src_vocab), len(tgt_vocab))
    optimizer = torch.optim.AdamW(model.parameters(), lr=hp["lr"], weight_decay=hp["weight_decay"])
    scheduler = (
        torch.optim.lr_scheduler.CosineAnnealingLR(optimizer, T_max=hp["epochs"])
        if hp.get("cosine_schedule")
        else None
    )
    criterion = nn.CrossEntropyLoss(ignore_index=PAD, label_smoothing=hp["label_smoothing"])

    def checkpoint(path: Path, epoch: int, valid_loss: float) -> None:
        torch.save(
            {
                "format_version": CHECKPOINT_VERSION,
                "spec": spec.to_dict(),
                "direction": direction,
                "seed": seed,
                "src_vocab": src_vocab.to_dict(),
                "tgt_vocab": tgt_vocab.to_dict(),
                "model_state": model.state_dict(),
                "epoch": epoch,
                "valid_loss": valid_loss,
            },
            path,
        )

    log = {
        "arch": spec.arch,
        "direction": direction,
        "seed": seed,
        "train_pairs": len(train_pairs),
        "valid_pairs": len(valid_pairs),
        "epochs": [],
        "best_epoch": None,
        "best_valid_loss": None,
    }
    started = time.perf_counter()
    best_valid = float("inf")
    for epoch in range(1, hp["epochs"] + 1):
        epoch_started = time.perf_counter()
        train_loss = _epoch_pass(model, spec, train_pairs, src_vocab, tgt_vocab, criterion, optimizer, rng)
        with torch.no_grad():
            valid_loss = _epoch_pass(model, spec, valid_pairs, src_vocab, tgt_vocab, criterion, None, None)
        if scheduler is not None:
            scheduler.step()
        seconds = time.perf_counter() - epoch_started
        log["epochs"].append(
            {"epoch": epoch, "train_loss": train_loss, "valid_loss": valid_loss, "seconds": seconds}
        )
        checkpoint(out_dir / "last.pt", epoch, valid_loss)
        if valid_loss < best_valid:
            best_valid = valid_loss
            log["best_epoch"] = epoch
            log["best_valid_loss"] = valid_loss
            checkpoint(out_dir / "best.pt", epoch, valid_loss)
        say(f"epoch {epoch}: train {train_loss:.4f} valid {valid_loss:.4f} ({seconds:.1f}s)")

    log["wall_seconds"] = time.perf_counter() - started
    with open(out_dir / "train_log.json", "w", encoding="utf-8") as fh:
        json.dump(log, fh, indent=1)
    return log
