"""Corpus reading, character vocabulary and batching.

Training files use the benchmark's JSONL interchange format
(``{"tajik": ..., "farsi": ..., "category": ...}`` per line); the
transliteration direction selects which side is the source.  The
vocabulary is built from the training split only, with PAD/BOS/EOS/UNK
specials; characters unseen at inference map to UNK.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import torch

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS = ["<pad>", "<bos>", "<eos>", "<unk>"]

DIRECTIONS = ("tj2fa", "fa2tj")


def read_pairs(path: str | Path, direction: str) -> list[tuple[str, str]]:
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                src, tgt = doc["tajik"], doc["farsi"]
            except (json.JSONDecodeError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: bad corpus line ({exc})") from exc
            if direction == "fa2tj":
                src, tgt = tgt, src
            pairs.append((src, tgt))
    return pairs


def read_lines(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


@dataclass
class CharVocab:
    chars: list[str]  # index -> symbol, specials first

    @classmethod
    def build(cls, texts) -> "CharVocab":
        seen: dict[str, None] = {}
        for text in texts:
            for ch in text:
                seen.setdefault(ch, None)
        return cls(chars=SPECIALS + sorted(seen))

    def __len__(self) -> int:
        return len(self.chars)

    @property
    def index(self) -> dict[str, int]:
        if not hasattr(self, "_index"):
            self._index = {ch: i for i, ch in enumerate(self.chars)}
        return self._index

    def encode(self, text: str, max_len: int | None = None) -> list[int]:
        ids = [self.index.get(ch, UNK) for ch in text]
        if max_len is not None:
            ids = ids[: max_len - 2]
        return [BOS] + ids + [EOS]

    def decode(self, ids) -> str:
        out = []
        for i in ids:
            if i == EOS:
                break
            if i in (PAD, BOS, UNK):
                continue  # UNK never surfaces in output text
            out.append(self.chars[i])
        return "".join(out)

    def to_dict(self) -> dict:
        return {"chars": self.chars}

    @classmethod
    def from_dict(cls, doc: dict) -> "CharVocab":
        vocab = cls(chars=list(doc["chars"]))
        if vocab.chars[:4] != SPECIALS:
            raise ValueError("checkpoint vocabulary is missing the special symbols")
        return vocab


def pad_batch(seqs: list[list[int]]) -> torch.Tensor:
    width = max(len(s) for s in seqs)
    out = torch.full((len(seqs), width), PAD, dtype=torch.long)
    for i, seq in enumerate(seqs):
        out[i, : len(seq)] = torch.tensor(seq, dtype=torch.long)
    return out


def batches(
    pairs: list[tuple[str, str]],
    src_vocab: CharVocab,
    tgt_vocab: CharVocab,
    batch_size: int,
    max_len: int,
    shuffle_rng: random.Random | None = None,
):
    """Yield (src, tgt) LongTensor batches, optionally shuffled."""
    order = list(range(len(pairs)))
    if shuffle_rng is not None:
        shuffle_rng.shuffle(order)
    for start in range(0, len(order), batch_size):
        chunk = order[start : start + batch_size]
        src = pad_batch([src_vocab.encode(pairs[i][0], max_len) for i in chunk])
        tgt = pad_batch([tgt_vocab.encode(pairs[i][1], max_len) for i in chunk])
        yield src, tgt
