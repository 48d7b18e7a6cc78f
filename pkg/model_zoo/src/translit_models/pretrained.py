"""Optional wrappers for pretrained seq2seq models (ByT5, mT5+LoRA, mBART).

These need the ``pretrained`` extra (transformers) and downloadable or
locally cached weights; the from-scratch architectures in this package
are the supported core.  LoRA is implemented here directly: rank-8
adapters with scaling 32 and dropout 0.05 on the attention q/k/v/o
projections, with the base weights frozen.
"""

from __future__ import annotations

import json
import math
import time
from pathlib import Path
from typing import Optional

import torch
import torch.nn as nn

from .data import read_lines, read_pairs
from .spec import ModelSpec


def _require_transformers():
    try:
        import transformers
    except ImportError as exc:  # pragma: no cover - environment dependent
        raise RuntimeError(
            "pretrained architectures need the 'pretrained' extra: pip install translit-model-zoo[pretrained]"
        ) from exc
    return transformers


class LoRALinear(nn.Module):
    """A frozen linear layer plus a trainable low-rank update."""

    def __init__(self, base: nn.Linear, rank: int, alpha: float, dropout: float):
        super().__init__()
        self.base = base
        for param in self.base.parameters():
            param.requires_grad = False
        self.lora_a = nn.Parameter(torch.zeros(rank, base.in_features))
        self.lora_b = nn.Parameter(torch.zeros(base.out_features, rank))
        nn.init.kaiming_uniform_(self.lora_a, a=math.sqrt(5))
        self.scaling = alpha / rank
        self.dropout = nn.Dropout(dropout)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.base(x) + self.dropout(x) @ self.lora_a.T @ self.lora_b.T * self.scaling


def apply_lora(
    model: nn.Module,
    rank: int = 8,
    alpha: float = 32.0,
    dropout: float = 0.05,
    targets: tuple[str, ...] = ("q", "k", "v", "o"),
) -> int:
    """Replace the targeted attention projections with LoRA-wrapped ones.

    Freezes everything else; returns the number of wrapped modules.
    """
    for param in model.parameters():
        param.requires_grad = False
    wrapped = 0
    for module in model.modules():
        for name, child in list(module.named_children()):
            if name in targets and isinstance(child, nn.Linear):
                setattr(module, name, LoRALinear(child, rank, alpha, dropout))
                wrapped += 1
    if wrapped == 0:
        raise ValueError(f"no linear modules named {targets} found to adapt")
    return wrapped


def build_pretrained(spec: ModelSpec, direction: str, model_path: Optional[str] = None):
    """Instantiate (model, tokenizer) for a pretrained architecture."""
    transformers = _require_transformers()
    hp = spec.resolved()
    name = model_path or hp["model_name"]
    if spec.arch == "mbart_large":
        tokenizer = transformers.AutoTokenizer.from_pretrained(
            name, src_lang=hp["src_lang"][direction], tgt_lang=hp["tgt_lang"][direction]
        )
        model = transformers.AutoModelForSeq2SeqLM.from_pretrained(name)
        model.config.forced_bos_token_id = tokenizer.lang_code_to_id[hp["tgt_lang"][direction]]
    else:
        tokenizer = transformers.AutoTokenizer.from_pretrained(name)
        model = transformers.AutoModelForSeq2SeqLM.from_pretrained(name)
    if spec.arch == "mt5_small_lora":
        apply_lora(model, hp["lora_rank"], hp["lora_alpha"], hp["lora_dropout"], hp["lora_targets"])
    return model, tokenizer


def _encode_batch(tokenizer, sources, targets, max_len):
    enc = tokenizer(list(sources), padding=True, truncation=True, max_length=max_len, return_tensors="pt")
    if targets is not None:
        labels = tokenizer(
            text_target=list(targets), padding=True, truncation=True, max_length=max_len, return_tensors="pt"
        ).input_ids
        labels[labels == tokenizer.pad_token_id] = -100
        enc["labels"] = labels
    return enc


def train_pretrained(
    spec: ModelSpec,
    train_file: str | Path,
    valid_file: str | Path,
    direction: str,
    seed: int,
    out_dir: str | Path,
    model_path: Optional[str] = None,
    model_and_tokenizer=None,
) -> dict:
    """Fine-tune with AdamW and linear decay; best checkpoint by valid loss.

    ``model_and_tokenizer`` lets tests inject a locally constructed tiny
    model instead of downloading weights.
    """
    hp = spec.resolved()
    torch.manual_seed(seed)
    model, tokenizer = model_and_tokenizer or build_pretrained(spec, direction, model_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    train_pairs = read_pairs(train_file, direction)
    valid_pairs = read_pairs(valid_file, direction)
    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.AdamW(trainable, lr=hp["lr"])
    n_batches = max(1, (len(train_pairs) + hp["batch_size"] - 1) // hp["batch_size"])
    scheduler = torch.optim.lr_scheduler.LinearLR(
        optimizer, start_factor=1.0, end_factor=0.0, total_iters=hp["epochs"] * n_batches
    )

    def split_loss(pairs) -> float:
        model.eval()
        total, count = 0.0, 0
        with torch.no_grad():
            for start in range(0, len(pairs), hp["batch_size"]):
                chunk = pairs[start : start + hp["batch_size"]]
                enc = _encode_batch(tokenizer, [s for s, _ in chunk], [t for _, t in chunk], hp["max_len"])
                total += float(model(**enc).loss) * len(chunk)
                count += len(chunk)
        return total / max(count, 1)

    log = {"arch": spec.arch, "direction": direction, "seed": seed, "epochs": []}
    best_valid = float("inf")
    started = time.perf_counter()
    for epoch in range(1, hp["epochs"] + 1):
        model.train()
        epoch_started = time.perf_counter()
        running, seen = 0.0, 0
        for start in range(0, len(train_pairs), hp["batch_size"]):
            chunk = train_pairs[start : start + hp["batch_size"]]
            enc = _encode_batch(tokenizer, [s for s, _ in chunk], [t for _, t in chunk], hp["max_len"])
            loss = model(**enc).loss
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            scheduler.step()
            running += loss.item() * len(chunk)
            seen += len(chunk)
        valid_loss = split_loss(valid_pairs)
        log["epochs"].append(
            {
                "epoch": epoch,
                "train_loss": running / max(seen, 1),
                "valid_loss": valid_loss,
                "seconds": time.perf_counter() - epoch_started,
            }
        )
        if valid_loss < best_valid:
            best_valid = valid_loss
            model.save_pretrained(out_dir / "best")
            tokenizer.save_pretrained(out_dir / "best")
            log["best_epoch"] = epoch
    log["wall_seconds"] = time.perf_counter() - started
    with open(out_dir / "train_log.json", "w", encoding="utf-8") as fh:
        json.dump(log, fh, indent=1)
    return log


def predict_pretrained(
    model,
    tokenizer,
    input_path: str | Path,
    output_path: str | Path,
    max_len: int = 512,
    batch_size: int = 8,
) -> int:
    """Greedy generation, one output line per input line."""
    lines = read_lines(input_path)
    model.eval()
    with open(output_path, "w", encoding="utf-8") as fh:
        for start in range(0, len(lines), batch_size):
            chunk = lines[start : start + batch_size]
            enc = _encode_batch(tokenizer, chunk, None, max_len)
            with torch.no_grad():
                out = model.generate(**enc, max_length=max_len, num_beams=1, do_sample=False)
            for row in tokenizer.batch_decode(out, skip_special_tokens=True):
                fh.write(row.replace("\n", " ") + "\n")
    return len(lines)
