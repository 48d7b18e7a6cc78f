"""Character-level encoder-decoder Transformer.

Covers both the plain character Transformer and its G2P variant; the
latter differs only in maximum length, regularization (label smoothing,
weight decay) and the uniform initialization of the embedding and output
layers.  Positions are sinusoidal, padding is masked out of attention.
"""

from __future__ import annotations

import math

import torch
import torch.nn as nn

from .data import BOS, EOS, PAD


class SinusoidalPositions(nn.Module):
    def __init__(self, embed_dim: int, max_len: int, dropout: float):
        super().__init__()
        self.dropout = nn.Dropout(dropout)
        position = torch.arange(max_len).unsqueeze(1)
        freq = torch.exp(torch.arange(0, embed_dim, 2) * (-math.log(10000.0) / embed_dim))
        table = torch.zeros(max_len, embed_dim)
        table[:, 0::2] = torch.sin(position * freq)
        table[:, 1::2] = torch.cos(position * freq)
        self.register_buffer("table", table.unsqueeze(0))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.dropout(x + self.table[:, : x.size(1)])


class Seq2SeqTransformer(nn.Module):
    def __init__(
        self,
        src_vocab_size: int,
        tgt_vocab_size: int,
        embed_dim: int = 256,
        heads: int = 8,
        layers: int = 4,
        hidden_dim: int = 1024,
        dropout: float = 0.1,
        max_len: int = 512,
        uniform_init_range: float | None = None,
    ):
        super().__init__()
        self.embed_dim = embed_dim
        self.max_len = max_len
        self.src_embed = nn.Embedding(src_vocab_size, embed_dim, padding_idx=PAD)
        self.tgt_embed = nn.Embedding(tgt_vocab_size, embed_dim, padding_idx=PAD)
        self.positions = SinusoidalPositions(embed_dim, max_len, dropout)
        self.transformer = nn.Transformer(
            d_model=embed_dim,
            nhead=heads,
            num_encoder_layers=layers,
            num_decoder_layers=layers,
            dim_feedforward=hidden_dim,
            dropout=dropout,
            batch_first=True,
        )
        self.out = nn.Linear(embed_dim, tgt_vocab_size)
        if uniform_init_range is not None:
            bound = uniform_init_range
            nn.init.uniform_(self.src_embed.weight, -bound, bound)
            nn.init.uniform_(self.tgt_embed.weight, -bound, bound)
            nn.init.uniform_(self.out.weight, -bound, bound)
            nn.init.zeros_(self.out.bias)

    def _embed(self, embedding: nn.Embedding, ids: torch.Tensor) -> torch.Tensor:
        return self.positions(embedding(ids) * math.sqrt(self.embed_dim))

    def forward(self, src: torch.Tensor, tgt_in: torch.Tensor) -> torch.Tensor:
        """Logits over the target vocabulary for each decoder position."""
        causal = nn.Transformer.generate_square_subsequent_mask(tgt_in.size(1))
        hidden = self.transformer(
            self._embed(self.src_embed, src),
            self._embed(self.tgt_embed, tgt_in),
            tgt_mask=causal,
            src_key_padding_mask=src == PAD,
            tgt_key_padding_mask=tgt_in == PAD,
            memory_key_padding_mask=src == PAD,
        )
        return self.out(hidden)

    @torch.no_grad()
    def greedy_decode(self, src: torch.Tensor, max_steps: int | None = None) -> list[list[int]]:
        """Argmax decoding; returns id sequences without BOS, EOS included."""
        self.eval()
        max_steps = max_steps or min(self.max_len, src.size(1) * 2 + 8)
        src_pad = src == PAD
        memory = self.transformer.encoder(self._embed(self.src_embed, src), src_key_padding_mask=src_pad)
        batch = src.size(0)
        ids = torch.full((batch, 1), BOS, dtype=torch.long)
        finished = torch.zeros(batch, dtype=torch.bool)
        for _ in range(max_steps):
            causal = nn.Transformer.generate_square_subsequent_mask(ids.size(1))
            hidden = self.transformer.decoder(
                self._embed(self.tgt_embed, ids),
                memory,
                tgt_mask=causal,
                memory_key_padding_mask=src_pad,
            )
            step = self.out(hidden[:, -1]).argmax(dim=-1)
            step = torch.where(finished, torch.full_like(step, EOS), step)
            ids = torch.cat([ids, step.unsqueeze(1)], dim=1)
            finished |= step == EOS
            if bool(finished.all()):
                break
        return [row[1:].tolist() for row in ids]
