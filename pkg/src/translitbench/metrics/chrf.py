"""chrF++ scoring.

The score is the beta-weighted F-measure averaged over character n-gram
orders 1..char_order plus word n-gram orders 1..word_order.  Character
n-grams are taken with all whitespace removed; word tokens peel one
leading/trailing ASCII punctuation character.  Corpus scores pool the
per-order n-gram counts over all segments before computing F, which is
what the standard scorer does and what makes per-item statistics
sufficient for bootstrap resampling.
"""

from __future__ import annotations

from collections import Counter

from .tokenize import chrf_word_tokens

_EPS = 1e-16


def _ngram_counts(seq, n: int) -> Counter:
    return Counter(tuple(seq[i : i + n]) for i in range(len(seq) - n + 1))


def pair_statistics(hypothesis: str, reference: str, char_order: int, word_order: int) -> list[int]:
    """Per-order (hyp_count, ref_count, match_count) triplets, flattened.

    Character orders come first, then word orders; matches are clipped
    counts (multiset intersection).
    """
    stats: list[int] = []
    hyp_chars = "".join(hypothesis.split())
    ref_chars = "".join(reference.split())
    hyp_words = chrf_word_tokens(hypothesis)
    ref_words = chrf_word_tokens(reference)
    for seq_h, seq_r, order in ((hyp_chars, ref_chars, char_order), (hyp_words, ref_words, word_order)):
        for n in range(1, order + 1):
            h_counts = _ngram_counts(seq_h, n)
            r_counts = _ngram_counts(seq_r, n)
            match = sum((h_counts & r_counts).values())
            stats.extend((sum(h_counts.values()), sum(r_counts.values()), match))
    return stats


def f_score(statistics, total_order: int, beta: float, eps_smoothing: bool = False) -> float:
    """chrF score in [0, 100] from pooled per-order statistics.

    Orders with no n-grams on either side contribute a vanishing epsilon
    term; the average divides by the number of orders present on both
    sides (the effective order), or by the full order count when
    eps-smoothing is requested.
    """
    score = 0.0
    effective_order = 0
    factor = beta * beta
    for i in range(total_order):
        n_hyp, n_ref, n_match = statistics[3 * i : 3 * i + 3]
        prec = n_match / n_hyp if n_hyp > 0 else _EPS
        rec = n_match / n_ref if n_ref > 0 else _EPS
        denom = factor * prec + rec
        score += ((1 + factor) * prec * rec / denom) if denom > 0 else _EPS
        if n_hyp > 0 and n_ref > 0:
            effective_order += 1
    if eps_smoothing:
        return float(min(100.0, max(0.0, 100.0 * score / total_order)))
    if effective_order == 0:
        return 0.0
    return float(min(100.0, max(0.0, 100.0 * score / effective_order)))


def corpus_chrf_pp(pairs, char_order: int = 6, word_order: int = 2, beta: float = 2.0) -> tuple[float, list[float]]:
    """Corpus chrF++ plus per-segment scores.

    ``pairs`` is an iterable of (hypothesis, reference).  The corpus score
    uses pooled counts; sentence scores apply the same formula to each
    segment's own counts (short segments fall back to their effective
    order).
    """
    total_order = char_order + word_order
    pooled = [0] * (3 * total_order)
    sentence_scores = []
    for hyp, ref in pairs:
        stats = pair_statistics(hyp, ref, char_order, word_order)
        for i, v in enumerate(stats):
            pooled[i] += v
        sentence_scores.append(f_score(stats, total_order, beta))
    if not sentence_scores:
        raise ValueError("chrF++ needs at least one segment")
    return f_score(pooled, total_order, beta), sentence_scores
