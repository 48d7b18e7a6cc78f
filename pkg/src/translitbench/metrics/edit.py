"""Unit-cost edit distance and the error rates built on it."""

from __future__ import annotations

from typing import Sequence


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Minimal number of insertions, deletions and substitutions.

    Works on any pair of sequences: strings compare Unicode scalar values,
    token lists compare words.
    """
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, 1):
            cur[j] = min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (ca != cb),
            )
        prev = cur
    return prev[-1]


def cer(hypothesis: str, reference: str) -> float:
    """Character error rate: edit distance over reference length."""
    if not reference:
        raise ValueError("CER is undefined for an empty reference")
    return levenshtein(hypothesis, reference) / len(reference)


def wer(hypothesis: str, reference: str) -> float:
    """Word error rate over whitespace tokens; may exceed 1."""
    ref_words = reference.split()
    if not ref_words:
        raise ValueError("WER is undefined for a reference with no words")
    return levenshtein(hypothesis.split(), ref_words) / len(ref_words)
