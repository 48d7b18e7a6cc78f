"""Bootstrap confidence intervals and paired significance tests.

The bootstrap resamples test items with replacement and recomputes the
corpus metric on each resample (metrics here are corpus-pooled, so
resampling per-item scores and averaging would measure something else).
Resample indices come from per-iteration substreams of the master seed,
which makes the interval independent of evaluation order and thread
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from .metrics.evaluate import EvalItem, HypothesisSet, PooledMetric
from .rng import GOLDEN_GAMMA, MASK64

WILCOXON_EXACT_MAX_N = 12


def _vector_splitmix64(state: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    state = state + np.uint64(GOLDEN_GAMMA)
    z = state.copy()
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return state, z ^ (z >> np.uint64(31))


class _VectorXoshiro:
    """One xoshiro256** stream per row, advanced in lockstep.

    Bit-compatible with :class:`translitbench.rng.Xoshiro256StarStar`: row
    i equals the scalar generator seeded with ``substream_seed(master, i)``.
    """

    def __init__(self, master_seed: int, rows: int):
        idx = np.arange(rows, dtype=np.uint64)
        base = np.uint64(master_seed & MASK64) + idx * np.uint64(GOLDEN_GAMMA)
        _, seeds = _vector_splitmix64(base)
        state = seeds
        s = []
        for _ in range(4):
            state, out = _vector_splitmix64(state)
            s.append(out)
        self._s = s

    @staticmethod
    def _rotl(x: np.ndarray, k: int) -> np.ndarray:
        return (x << np.uint64(k)) | (x >> np.uint64(64 - k))

    def next_u64(self) -> np.ndarray:
        s0, s1, s2, s3 = self._s
        result = self._rotl(s1 * np.uint64(5), 7) * np.uint64(9)
        t = s1 << np.uint64(17)
        s2 = s2 ^ s0
        s3 = s3 ^ s1
        s1 = s1 ^ s2
        s0 = s0 ^ s3
        s2 = s2 ^ t
        s3 = self._rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def randbelow(self, n: int) -> np.ndarray:
        # Same fixed-point multiply as the scalar generator, via 32-bit
        # limbs because numpy has no 128-bit product.
        x = self.next_u64()
        lo = (x & np.uint64(0xFFFFFFFF)) * np.uint64(n)
        hi = (x >> np.uint64(32)) * np.uint64(n)
        return ((hi + (lo >> np.uint64(32))) >> np.uint64(32)).astype(np.int64)


def resample_index_matrix(master_seed: int, resamples: int, n_items: int) -> np.ndarray:
    """(resamples, n_items) index matrix; row i is drawn by substream i."""
    gen = _VectorXoshiro(master_seed, resamples)
    cols = [gen.randbelow(n_items) for _ in range(n_items)]
    return np.stack(cols, axis=1)


def _percentile(sorted_values: np.ndarray, q: float) -> float:
    """Linear-interpolation percentile of pre-sorted data, q in [0, 1]."""
    pos = q * (len(sorted_values) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    frac = pos - lo
    return float(sorted_values[lo] * (1 - frac) + sorted_values[hi] * frac)


def bootstrap_ci(
    hset: HypothesisSet | Sequence[EvalItem],
    metric: PooledMetric | Callable[[list[EvalItem]], float],
    resamples: int = 2000,
    level: float = 0.95,
    seed: int = 42,
    threads: int = 1,
) -> tuple[float, float]:
    """Percentile bootstrap interval for a corpus metric.

    ``metric`` is either a :class:`PooledMetric` (fast path: per-item
    statistics are pooled per resample) or any callable taking a list of
    items (generic path).  Both paths consume identical index matrices,
    so they produce identical intervals for pooled metrics.
    """
    items = list(hset.items) if isinstance(hset, HypothesisSet) else list(hset)
    if not items:
        raise ValueError("bootstrap needs a non-empty item set")
    if resamples < 1:
        raise ValueError("resamples must be >= 1")
    if not (0.0 < level < 1.0):
        raise ValueError("level must be in (0, 1)")

    indices = resample_index_matrix(seed, resamples, len(items))

    if isinstance(metric, PooledMetric):
        stats = metric.item_stats(items)
        pooled = stats[indices].sum(axis=1)
        scores = np.asarray([metric.finalize(row) for row in pooled], dtype=np.float64)
    else:
        def one(row) -> float:
            return float(metric([items[j] for j in row]))

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                scores = np.asarray(list(pool.map(one, indices)), dtype=np.float64)
        else:
            scores = np.asarray([one(row) for row in indices], dtype=np.float64)

    scores.sort()
    alpha = (1.0 - level) / 2.0
    return _percentile(scores, alpha), _percentile(scores, 1.0 - alpha)


def _ranks_doubled(abs_diffs: list[float]) -> list[int]:
    """Average ranks of |d| with ties, scaled by 2 so they stay integers."""
    order = sorted(range(len(abs_diffs)), key=lambda i: abs_diffs[i])
    ranks2 = [0] * len(abs_diffs)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and abs_diffs[order[j + 1]] == abs_diffs[order[i]]:
            j += 1
        # ranks i+1 .. j+1 (1-based) tie; doubled average = (i + j + 2)
        for k in range(i, j + 1):
            ranks2[order[k]] = i + j + 2
        i = j + 1
    return ranks2


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def wilcoxon_signed_rank(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sided paired Wilcoxon signed-rank p-value.

    Zero differences are dropped.  Up to n = 12 the p-value is exact,
    from full enumeration of all 2**n sign assignments over the (tied,
    averaged) ranks; beyond that the normal approximation with tie and
    continuity corrections is used.  All scores equal yields p = 1.
    """
    if len(a) != len(b):
        raise ValueError("paired samples must have equal length")
    diffs = [x - y for x, y in zip(a, b) if x != y]
    n = len(diffs)
    if n == 0:
        return 1.0
    if n < 5:
        raise ValueError("need at least 5 nonzero differences")

    ranks2 = _ranks_doubled([abs(d) for d in diffs])
    w2_pos = sum(r for d, r in zip(diffs, ranks2) if d > 0)
    total2 = sum(ranks2)

    if n <= WILCOXON_EXACT_MAX_N:
        # Enumerate the exact null distribution of the doubled statistic.
        sums = [0]
        for r in ranks2:
            sums = [s for s in sums] + [s + r for s in sums]
        count_le = sum(1 for s in sums if s <= w2_pos)
        count_ge = sum(1 for s in sums if s >= w2_pos)
        p = 2.0 * min(count_le, count_ge) / len(sums)
        return min(1.0, p)

    w_pos = w2_pos / 2.0
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    # Tie correction: sum(t^3 - t)/48 over tie groups.
    tie_sizes: dict[int, int] = {}
    for r in ranks2:
        tie_sizes[r] = tie_sizes.get(r, 0) + 1
    var -= sum(t**3 - t for t in tie_sizes.values()) / 48.0
    d = w_pos - mean
    d -= 0.5 * math.copysign(1.0, d) if d != 0 else 0.0
    z = d / math.sqrt(var)
    return min(1.0, 2.0 * _normal_sf(abs(z)))


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (Lentz's algorithm)."""
    max_iter = 200
    eps = 3e-14
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _student_t_sf(t: float, df: float) -> float:
    """P(T > t) for Student's t via the regularized incomplete beta."""
    x = df / (df + t * t)
    p = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x)
    return p if t >= 0 else 1.0 - p


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sided paired t-test p-value.

    Zero variance of the differences is degenerate: p = 1 when the mean
    difference is also zero, p = 0 otherwise.
    """
    if len(a) != len(b):
        raise ValueError("paired samples must have equal length")
    n = len(a)
    if n < 2:
        raise ValueError("need at least 2 pairs")
    diffs = [x - y for x, y in zip(a, b)]
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        return 1.0 if mean == 0.0 else 0.0
    t = mean / math.sqrt(var / n)
    return min(1.0, 2.0 * _student_t_sf(abs(t), n - 1))


@dataclass
class RunAggregate:
    metric_name: str
    per_seed_values: list[float]
    mean: float
    std: Optional[float]
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    ci_level: float = 0.95

    def to_dict(self) -> dict:
        return {
            "metric_name": self.metric_name,
            "per_seed_values": self.per_seed_values,
            "mean": self.mean,
            "std": self.std,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "ci_level": self.ci_level,
        }


def aggregate_runs(values: Sequence[float], metric_name: str = "") -> RunAggregate:
    """Mean and sample standard deviation over per-seed metric values.

    With a single value the deviation is undefined and reported as absent;
    confidence bounds are filled in by the caller from bootstrap_ci.
    """
    if not values:
        raise ValueError("need at least one value")
    vals = [float(v) for v in values]
    if len(set(vals)) == 1:  # exact mean/zero deviation, no float residue
        return RunAggregate(
            metric_name=metric_name,
            per_seed_values=vals,
            mean=vals[0],
            std=0.0 if len(vals) >= 2 else None,
        )
    mean = sum(vals) / len(vals)
    std = math.sqrt(sum((v - mean) ** 2 for v in vals) / (len(vals) - 1))
    return RunAggregate(metric_name=metric_name, per_seed_values=vals, mean=mean, std=std)


@dataclass
class PairwiseComparison:
    model_a: str
    model_b: str
    wilcoxon_p: float
    ttest_p: float
    significant_at: float = 0.05

    def to_dict(self) -> dict:
        return {
            "model_a": self.model_a,
            "model_b": self.model_b,
            "wilcoxon_p": self.wilcoxon_p,
            "ttest_p": self.ttest_p,
            "significant_at": self.significant_at,
            "wilcoxon_significant": self.wilcoxon_p < self.significant_at,
            "ttest_significant": self.ttest_p < self.significant_at,
        }


@dataclass
class SignificanceReport:
    direction: str
    pairs: list[PairwiseComparison] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"direction": self.direction, "pairs": [p.to_dict() for p in self.pairs]}


def significance_report(
    per_model_scores: dict[str, Sequence[float]],
    direction: str,
    alpha: float = 0.05,
) -> SignificanceReport:
    """All pairwise model comparisons on aligned per-item score vectors.

    Score vectors must be index-aligned (same test items in the same
    order for every model), which the harness guarantees per seed.
    """
    lengths = {len(v) for v in per_model_scores.values()}
    if len(lengths) > 1:
        raise ValueError("per-model score vectors are not aligned")
    report = SignificanceReport(direction=direction)
    for model_a, model_b in combinations(sorted(per_model_scores), 2):
        a = per_model_scores[model_a]
        b = per_model_scores[model_b]
        report.pairs.append(
            PairwiseComparison(
                model_a=model_a,
                model_b=model_b,
                wilcoxon_p=wilcoxon_signed_rank(a, b),
                ttest_p=paired_t_test(a, b),
                significant_at=alpha,
            )
        )
    return report
