"""Bidirectional LSTM encoder-decoder with additive attention.

The encoder is a two-layer bidirectional LSTM; the decoder is a
two-layer LSTM whose input at each step is the previous token embedding
concatenated with an attention context over the encoder outputs, and
whose output layer sees the LSTM output concatenated with that context.
Teacher forcing is sampled per decoding step during training.
"""

from __future__ import annotations

import random

import torch
import torch.nn as nn

from .data import BOS, EOS, PAD


class AdditiveAttention(nn.Module):
    def __init__(self, enc_dim: int, dec_dim: int, attn_dim: int):
        super().__init__()
        self.enc_proj = nn.Linear(enc_dim, attn_dim, bias=False)
        self.dec_proj = nn.Linear(dec_dim, attn_dim, bias=False)
        self.score = nn.Linear(attn_dim, 1, bias=False)

    def forward(self, dec_state: torch.Tensor, enc_out: torch.Tensor, enc_mask: torch.Tensor):
        # dec_state: (B, dec_dim); enc_out: (B, L, enc_dim); enc_mask: True at pads
        scores = self.score(
            torch.tanh(self.enc_proj(enc_out) + self.dec_proj(dec_state).unsqueeze(1))
        ).squeeze(-1)
        scores = scores.masked_fill(enc_mask, float("-inf"))
        weights = torch.softmax(scores, dim=-1)
        context = torch.bmm(weights.unsqueeze(1), enc_out).squeeze(1)
        return context, weights


class LstmSeq2Seq(nn.Module):
    def __init__(
        self,
        src_vocab_size: int,
        tgt_vocab_size: int,
        embed_dim: int = 256,
        hidden_dim: int = 256,
        layers: int = 2,
        dropout: float = 0.1,
        bidirectional_encoder: bool = True,
    ):
        super().__init__()
        self.layers = layers
        self.hidden_dim = hidden_dim
        enc_dirs = 2 if bidirectional_encoder else 1
        enc_dim = hidden_dim * enc_dirs
        self.src_embed = nn.Embedding(src_vocab_size, embed_dim, padding_idx=PAD)
        self.tgt_embed = nn.Embedding(tgt_vocab_size, embed_dim, padding_idx=PAD)
        self.encoder = nn.LSTM(
            embed_dim,
            hidden_dim,
            num_layers=layers,
            bidirectional=bidirectional_encoder,
            dropout=dropout if layers > 1 else 0.0,
            batch_first=True,
        )
        self.bridge_h = nn.Linear(enc_dim, hidden_dim)
        self.bridge_c = nn.Linear(enc_dim, hidden_dim)
        self.decoder = nn.LSTM(
            embed_dim + enc_dim,
            hidden_dim,
            num_layers=layers,
            dropout=dropout if layers > 1 else 0.0,
            batch_first=True,
        )
        self.attention = AdditiveAttention(enc_dim, hidden_dim, hidden_dim)
        self.dropout = nn.Dropout(dropout)
        self.out = nn.Linear(hidden_dim + enc_dim, tgt_vocab_size)
        self.enc_dirs = enc_dirs

    def encode(self, src: torch.Tensor):
        enc_out, (h, c) = self.encoder(self.dropout(self.src_embed(src)))
        # merge the directions of each layer into the decoder's initial state
        if self.enc_dirs == 2:
            h = h.view(self.layers, 2, -1, self.hidden_dim)
            c = c.view(self.layers, 2, -1, self.hidden_dim)
            h = torch.cat([h[:, 0], h[:, 1]], dim=-1)
            c = torch.cat([c[:, 0], c[:, 1]], dim=-1)
        h0 = torch.tanh(self.bridge_h(h))
        c0 = torch.tanh(self.bridge_c(c))
        return enc_out, (h0.contiguous(), c0.contiguous())

    def _step(self, prev_ids, state, enc_out, enc_mask):
        context, _ = self.attention(state[0][-1], enc_out, enc_mask)
        decoder_in = torch.cat([self.dropout(self.tgt_embed(prev_ids)), context], dim=-1)
        output, state = self.decoder(decoder_in.unsqueeze(1), state)
        logits = self.out(torch.cat([output.squeeze(1), context], dim=-1))
        return logits, state

    def forward(
        self,
        src: torch.Tensor,
        tgt_in: torch.Tensor,
        teacher_forcing_p: float = 1.0,
        rng: random.Random | None = None,
    ) -> torch.Tensor:
        """Step-by-step decoding over the gold-length window.

        With probability 1 - teacher_forcing_p a step consumes the model's
        own previous argmax instead of the gold token.
        """
        enc_out, state = self.encode(src)
        enc_mask = src == PAD
        prev = tgt_in[:, 0]
        all_logits = []
        for t in range(tgt_in.size(1)):
            logits, state = self._step(prev, state, enc_out, enc_mask)
            all_logits.append(logits)
            if t + 1 < tgt_in.size(1):
                use_gold = teacher_forcing_p >= 1.0 or (
                    rng is not None and rng.random() < teacher_forcing_p
                )
                prev = tgt_in[:, t + 1] if use_gold else logits.argmax(dim=-1).detach()
        return torch.stack(all_logits, dim=1)

    @torch.no_grad()
    def greedy_decode(self, src: torch.Tensor, max_steps: int | None = None) -> list[list[int]]:
        self.eval()
        max_steps = max_steps or src.size(1) * 2 + 8
        enc_out, state = self.encode(src)
        enc_mask = src == PAD
        batch = src.size(0)
        prev = torch.full((batch,), BOS, dtype=torch.long)
        finished = torch.zeros(batch, dtype=torch.bool)
        rows: list[list[int]] = [[] for _ in range(batch)]
        for _ in range(max_steps):
            logits, state = self._step(prev, state, enc_out, enc_mask)
            step = logits.argmax(dim=-1)
            step = torch.where(finished, torch.full_like(step, EOS), step)
            for i, tok in enumerate(step.tolist()):
                if not finished[i]:
                    rows[i].append(tok)
            finished |= step == EOS
            if bool(finished.all()):
                break
            prev = step
        return rows
