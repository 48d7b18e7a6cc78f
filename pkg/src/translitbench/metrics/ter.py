"""Translation Edit Rate with block-shift search.

Follows the TERCOM procedure: greedily apply the block shift that most
reduces the word-level edit distance (each shift costs one edit),
repeat until no shift helps, then add the remaining edit distance.
Corpus TER is total edits over total reference words, in percent, and
can exceed 100.  Shift blocks are capped at 10 words and a shift may not
move a block further than 50 positions, per the TERCOM conventions.
"""

from __future__ import annotations

MAX_SHIFT_SIZE = 10
MAX_SHIFT_DIST = 50
MAX_SHIFT_CANDIDATES = 1000

_OP_NOP = " "
_OP_SUB = "s"
_OP_INS = "i"  # extra hypothesis word
_OP_DEL = "d"  # missing reference word


def edit_distance_with_trace(hyp: list[str], ref: list[str]) -> tuple[int, str]:
    """Unit-cost edit distance and one optimal forward trace.

    Ties prefer match/substitution, then deletion, then insertion, so the
    produced alignment is deterministic.
    """
    m, n = len(hyp), len(ref)
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        dp[i][0] = i
    for j in range(1, n + 1):
        dp[0][j] = j
    for i in range(1, m + 1):
        row = dp[i]
        prev = dp[i - 1]
        hyp_word = hyp[i - 1]
        for j in range(1, n + 1):
            row[j] = min(
                prev[j - 1] + (hyp_word != ref[j - 1]),
                row[j - 1] + 1,
                prev[j] + 1,
            )
    ops = []
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1]):
            ops.append(_OP_NOP if hyp[i - 1] == ref[j - 1] else _OP_SUB)
            i -= 1
            j -= 1
        elif j > 0 and dp[i][j] == dp[i][j - 1] + 1:
            ops.append(_OP_DEL)
            j -= 1
        else:
            ops.append(_OP_INS)
            i -= 1
    return dp[m][n], "".join(reversed(ops))


def _trace_to_alignment(trace: str) -> tuple[dict[int, int], list[int], list[int]]:
    """Maps each reference position to its aligned hypothesis position and
    flags erroneous positions on both sides."""
    align: dict[int, int] = {}
    ref_err: list[int] = []
    hyp_err: list[int] = []
    pos_hyp = -1
    pos_ref = -1
    for op in trace:
        if op == _OP_NOP:
            pos_hyp += 1
            pos_ref += 1
            align[pos_ref] = pos_hyp
            hyp_err.append(0)
            ref_err.append(0)
        elif op == _OP_SUB:
            pos_hyp += 1
            pos_ref += 1
            align[pos_ref] = pos_hyp
            hyp_err.append(1)
            ref_err.append(1)
        elif op == _OP_INS:
            pos_hyp += 1
            hyp_err.append(1)
        else:
            pos_ref += 1
            ref_err.append(1)
    return align, ref_err, hyp_err


def _find_shifted_pairs(hyp: list[str], ref: list[str]):
    """Yield (start_hyp, start_ref, length) for every equal word block."""
    for start_h in range(len(hyp)):
        for start_r in range(len(ref)):
            if abs(start_r - start_h) > MAX_SHIFT_DIST:
                continue
            length = 0
            while (
                start_h + length < len(hyp)
                and start_r + length < len(ref)
                and hyp[start_h + length] == ref[start_r + length]
                and length < MAX_SHIFT_SIZE
            ):
                length += 1
                yield start_h, start_r, length


def _perform_shift(words: list[str], start: int, length: int, target: int) -> list[str]:
    rest = words[:start] + words[start + length :]
    pos = target - length if target >= start + length else target
    return rest[:pos] + words[start : start + length] + rest[pos:]


def _best_shift(words, ref, pre_edits, trace, checked: int):
    align, ref_err, hyp_err = _trace_to_alignment(trace)
    best = None
    for start_h, start_r, length in _find_shifted_pairs(words, ref):
        # A useful shift must move erroneous hypothesis words to a
        # reference region that is itself in error, and must not shift a
        # block onto its own aligned position.
        if not any(hyp_err[start_h : start_h + length]):
            continue
        if not any(ref_err[start_r : start_r + length]):
            continue
        if start_r in align and start_h <= align[start_r] < start_h + length:
            continue

        prev_idx = -1
        for offset in range(-1, length):
            if start_r + offset == -1:
                idx = 0
            elif start_r + offset in align:
                idx = align[start_r + offset] + 1
            else:
                break
            if idx == prev_idx:
                continue
            prev_idx = idx

            shifted = _perform_shift(words, start_h, length, idx)
            edits, _ = edit_distance_with_trace(shifted, ref)
            # Ranked like TERCOM: biggest gain, then longest block, then
            # earliest source, then earliest target position.
            candidate = (pre_edits - edits, length, -start_h, -idx, shifted)
            checked += 1
            if best is None or candidate > best:
                best = candidate
            if checked >= MAX_SHIFT_CANDIDATES:
                break
        if checked >= MAX_SHIFT_CANDIDATES:
            break

    if best is None or best[0] <= 0:
        return 0, words, checked
    return best[0], best[4], checked


def translation_edit_rate(hyp_words: list[str], ref_words: list[str], shifts_enabled: bool = True) -> tuple[int, int]:
    """Number of edits (shifts included) and the reference length."""
    if not ref_words:
        return len(hyp_words), 0
    if hyp_words == ref_words:
        return 0, len(ref_words)
    if not shifts_enabled:
        edits, _ = edit_distance_with_trace(list(hyp_words), list(ref_words))
        return edits, len(ref_words)

    words = list(hyp_words)
    shifts = 0
    checked = 0
    while True:
        edits, trace = edit_distance_with_trace(words, ref_words)
        delta, shifted, checked = _best_shift(words, ref_words, edits, trace, checked)
        # A shift found right at the candidate budget is discarded, not
        # half-applied, so the edit count stays consistent.
        if checked >= MAX_SHIFT_CANDIDATES or delta <= 0:
            break
        shifts += 1
        words = shifted
    final_edits, _ = edit_distance_with_trace(words, ref_words)
    return shifts + final_edits, len(ref_words)


def score_from_totals(total_edits: float, total_ref_words: float) -> float:
    """Corpus TER percent from pooled counts."""
    if total_ref_words > 0:
        return float(100.0 * total_edits / total_ref_words)
    return 100.0 if total_edits > 0 else 0.0


def corpus_ter(token_pairs, shifts_enabled: bool = True) -> float:
    """TER over (hyp_tokens, ref_tokens) pairs (already tokenized)."""
    total_edits = 0
    total_ref = 0
    for hyp_tokens, ref_tokens in token_pairs:
        edits, ref_len = translation_edit_rate(hyp_tokens, ref_tokens, shifts_enabled)
        total_edits += edits
        total_ref += ref_len
    return score_from_totals(total_edits, total_ref)
