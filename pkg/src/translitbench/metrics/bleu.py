"""Corpus BLEU with exponential smoothing.

Clipped n-gram precisions for orders 1..4 are pooled over the corpus,
combined by geometric mean and multiplied by the brevity penalty; orders
with zero matches fall back to the mteval exponential smoothing floor.
This mirrors the standard corpus scorer bit for bit, except that the
final value is clamped into [0, 100] (the geometric mean can exceed 100
by a few ulps on a perfect corpus).
"""

from __future__ import annotations

import math
from collections import Counter

_LOG_ZERO = -9999999999


def _ngrams(tokens: list[str], max_order: int) -> Counter:
    counts: Counter = Counter()
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


def pair_statistics(hyp_tokens: list[str], ref_tokens: list[str], max_order: int = 4) -> list[int]:
    """Flat statistics vector: correct[1..k], total[1..k], hyp_len, ref_len."""
    correct = [0] * max_order
    total = [0] * max_order
    hyp_counts = _ngrams(hyp_tokens, max_order)
    ref_counts = _ngrams(ref_tokens, max_order)
    for ngram, count in hyp_counts.items():
        n = len(ngram)
        total[n - 1] += count
        if ngram in ref_counts:
            correct[n - 1] += min(count, ref_counts[ngram])
    return correct + total + [len(hyp_tokens), len(ref_tokens)]


def score_from_statistics(stats, max_order: int = 4, effective_order: bool = False) -> float:
    """BLEU in [0, 100] from pooled statistics (exponential smoothing)."""
    correct = stats[:max_order]
    total = stats[max_order : 2 * max_order]
    hyp_len, ref_len = stats[2 * max_order], stats[2 * max_order + 1]

    precisions = [0.0] * max_order
    smooth_mteval = 1.0
    eff_order = max_order
    for n in range(1, max_order + 1):
        if total[n - 1] == 0:
            break
        if effective_order:
            eff_order = n
        if correct[n - 1] == 0:
            smooth_mteval *= 2
            precisions[n - 1] = 100.0 / (smooth_mteval * total[n - 1])
        else:
            precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1]

    if hyp_len < ref_len:
        brevity_penalty = math.exp(1 - ref_len / hyp_len) if hyp_len > 0 else 0.0
    else:
        brevity_penalty = 1.0

    log_sum = sum(math.log(p) if p > 0.0 else _LOG_ZERO for p in precisions[:eff_order])
    score = brevity_penalty * math.exp(log_sum / eff_order)
    return float(min(100.0, max(0.0, score)))


def corpus_bleu(token_pairs, max_order: int = 4) -> float:
    """BLEU over (hyp_tokens, ref_tokens) pairs (already tokenized)."""
    pooled = [0] * (2 * max_order + 2)
    n_pairs = 0
    for hyp_tokens, ref_tokens in token_pairs:
        for i, v in enumerate(pair_statistics(hyp_tokens, ref_tokens, max_order)):
            pooled[i] += v
        n_pairs += 1
    if n_pairs == 0:
        raise ValueError("BLEU needs at least one segment")
    return score_from_statistics(pooled, max_order)
