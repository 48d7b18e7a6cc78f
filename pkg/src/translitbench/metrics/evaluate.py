"""Six-metric evaluation of a hypothesis set, overall and per category.

Every metric here is corpus-pooled: each item contributes an additive
statistics vector and the final score is a function of the pooled vector.
That decomposition is exposed (:class:`PooledMetric`) because bootstrap
resampling recomputes corpus scores thousands of times and only needs to
re-pool the per-item statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import bleu as bleu_mod
from . import chrf as chrf_mod
from . import ter as ter_mod
from .edit import levenshtein
from .tokenize import BLEU_TOKENIZERS, tokenize_tercom


class EvalItem(NamedTuple):
    hypothesis: str
    reference: str
    category: str = "all"


@dataclass
class HypothesisSet:
    items: list[EvalItem]
    direction: str = "tj2fa"

    def __post_init__(self):
        if not self.items:
            raise ValueError("hypothesis set must be non-empty")
        self.items = [EvalItem(*item) for item in self.items]


@dataclass(frozen=True)
class MetricConfig:
    char_ngram_order: int = 6
    word_ngram_order: int = 2
    beta: float = 2.0
    bleu_max_order: int = 4
    bleu_smoothing: str = "exp"
    bleu_tokenizer: str = "international"
    ter_shift_enabled: bool = True
    ter_case_sensitive: bool = True

    def validate(self) -> None:
        if self.char_ngram_order < 1 or self.word_ngram_order < 0 or self.bleu_max_order < 1:
            raise ValueError("n-gram orders must be >= 1")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.bleu_smoothing != "exp":
            raise ValueError(f"unsupported BLEU smoothing {self.bleu_smoothing!r}")
        if self.bleu_tokenizer not in BLEU_TOKENIZERS:
            raise ValueError(f"unknown BLEU tokenizer {self.bleu_tokenizer!r}")

    def to_dict(self) -> dict:
        return {
            "char_ngram_order": self.char_ngram_order,
            "word_ngram_order": self.word_ngram_order,
            "beta": self.beta,
            "bleu_max_order": self.bleu_max_order,
            "bleu_smoothing": self.bleu_smoothing,
            "bleu_tokenizer": self.bleu_tokenizer,
            "ter_shift_enabled": self.ter_shift_enabled,
            "ter_case_sensitive": self.ter_case_sensitive,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricConfig":
        cfg = cls(**doc)
        cfg.validate()
        return cfg


class PooledMetric:
    """A corpus metric decomposed into additive per-item statistics.

    ``item_stats`` maps items to an (n_items, width) float array;
    ``finalize`` turns a pooled (summed) row back into the corpus score.
    Resampling items and rescoring is then just row re-summation.
    """

    name: str = ""

    def __init__(self, cfg: MetricConfig | None = None):
        pass

    def item_stats(self, items: Sequence[EvalItem]) -> np.ndarray:
        raise NotImplementedError

    def finalize(self, pooled: np.ndarray) -> float:
        raise NotImplementedError

    def corpus_score(self, items: Sequence[EvalItem]) -> float:
        return self.finalize(self.item_stats(items).sum(axis=0))


class ChrfPP(PooledMetric):
    name = "chrf_pp"

    def __init__(self, cfg: MetricConfig):
        self.char_order = cfg.char_ngram_order
        self.word_order = cfg.word_ngram_order
        self.beta = cfg.beta
        self.total_order = self.char_order + self.word_order

    def item_stats(self, items):
        rows = [
            chrf_mod.pair_statistics(it.hypothesis, it.reference, self.char_order, self.word_order)
            for it in items
        ]
        return np.asarray(rows, dtype=np.float64)

    def finalize(self, pooled):
        return chrf_mod.f_score(pooled, self.total_order, self.beta)

    def sentence_scores(self, stats: np.ndarray) -> list[float]:
        return [chrf_mod.f_score(row, self.total_order, self.beta) for row in stats]


class Bleu(PooledMetric):
    name = "bleu"

    def __init__(self, cfg: MetricConfig):
        self.max_order = cfg.bleu_max_order
        self.tokenizer = BLEU_TOKENIZERS[cfg.bleu_tokenizer]

    def item_stats(self, items):
        rows = [
            bleu_mod.pair_statistics(
                self.tokenizer(it.hypothesis), self.tokenizer(it.reference), self.max_order
            )
            for it in items
        ]
        return np.asarray(rows, dtype=np.float64)

    def finalize(self, pooled):
        return bleu_mod.score_from_statistics(pooled, self.max_order)


class Ter(PooledMetric):
    name = "ter"

    def __init__(self, cfg: MetricConfig):
        self.shifts_enabled = cfg.ter_shift_enabled
        self.case_sensitive = cfg.ter_case_sensitive

    def item_stats(self, items):
        rows = []
        for it in items:
            edits, ref_len = ter_mod.translation_edit_rate(
                tokenize_tercom(it.hypothesis, self.case_sensitive),
                tokenize_tercom(it.reference, self.case_sensitive),
                self.shifts_enabled,
            )
            rows.append((edits, ref_len))
        return np.asarray(rows, dtype=np.float64)

    def finalize(self, pooled):
        return ter_mod.score_from_totals(pooled[0], pooled[1])


class Cer(PooledMetric):
    """Pooled character error rate: total distance over total reference
    characters (per-item rates are also derivable from the rows)."""

    name = "cer"

    def item_stats(self, items):
        rows = [
            (levenshtein(it.hypothesis, it.reference), len(it.reference)) for it in items
        ]
        return np.asarray(rows, dtype=np.float64)

    def finalize(self, pooled):
        return float(pooled[0] / pooled[1])


class Wer(PooledMetric):
    name = "wer"

    def item_stats(self, items):
        rows = [
            (levenshtein(it.hypothesis.split(), it.reference.split()), len(it.reference.split()))
            for it in items
        ]
        return np.asarray(rows, dtype=np.float64)

    def finalize(self, pooled):
        return float(pooled[0] / pooled[1])


class Accuracy(PooledMetric):
    name = "accuracy"

    def item_stats(self, items):
        rows = [(1.0 if it.hypothesis == it.reference else 0.0, 1.0) for it in items]
        return np.asarray(rows, dtype=np.float64)

    def finalize(self, pooled):
        return float(pooled[0] / pooled[1])


METRIC_NAMES = ("chrf_pp", "bleu", "ter", "cer", "wer", "accuracy")


def build_metrics(cfg: MetricConfig) -> dict[str, PooledMetric]:
    cfg.validate()
    return {
        "chrf_pp": ChrfPP(cfg),
        "bleu": Bleu(cfg),
        "ter": Ter(cfg),
        "cer": Cer(cfg),
        "wer": Wer(cfg),
        "accuracy": Accuracy(cfg),
    }


@dataclass
class MetricReport:
    chrf_pp: float
    bleu: float
    ter: float
    cer: float
    wer: float
    accuracy: float
    item_count: int
    per_category: dict[str, dict] = field(default_factory=dict)
    sentence_chrf: list[float] = field(default_factory=list)

    def scores(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def to_dict(self) -> dict:
        return {
            **self.scores(),
            "item_count": self.item_count,
            "per_category": self.per_category,
            "sentence_chrf": self.sentence_chrf,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricReport":
        return cls(
            chrf_pp=doc["chrf_pp"],
            bleu=doc["bleu"],
            ter=doc["ter"],
            cer=doc["cer"],
            wer=doc["wer"],
            accuracy=doc["accuracy"],
            item_count=doc["item_count"],
            per_category=doc.get("per_category", {}),
            sentence_chrf=doc.get("sentence_chrf", []),
        )


def _check_references(items: Sequence[EvalItem]) -> None:
    bad = [i for i, it in enumerate(items) if not it.reference.split()]
    if bad:
        raise ValueError(
            f"empty reference makes CER/WER undefined (items {bad[:10]}{'...' if len(bad) > 10 else ''})"
        )


def evaluate(hset: HypothesisSet, cfg: MetricConfig | None = None) -> MetricReport:
    """All six metrics, overall and per category, plus sentence chrF++."""
    cfg = cfg or MetricConfig()
    metrics = build_metrics(cfg)
    items = hset.items
    _check_references(items)

    stats = {name: m.item_stats(items) for name, m in metrics.items()}
    overall = {name: metrics[name].finalize(stats[name].sum(axis=0)) for name in METRIC_NAMES}

    per_category: dict[str, dict] = {}
    category_rows: dict[str, list[int]] = {}
    for i, it in enumerate(items):
        category_rows.setdefault(it.category, []).append(i)
    for cat, rows in category_rows.items():
        idx = np.asarray(rows)
        entry = {
            name: metrics[name].finalize(stats[name][idx].sum(axis=0)) for name in METRIC_NAMES
        }
        entry["items"] = len(rows)
        per_category[cat] = entry

    chrf_metric: ChrfPP = metrics["chrf_pp"]  # type: ignore[assignment]
    return MetricReport(
        item_count=len(items),
        per_category=per_category,
        sentence_chrf=chrf_metric.sentence_scores(stats["chrf_pp"]),
        **overall,
    )


def exact_match_accuracy(hset: HypothesisSet) -> float:
    return Accuracy().corpus_score(hset.items)


def chrf_pp(hset: HypothesisSet, cfg: MetricConfig | None = None) -> tuple[float, list[float]]:
    cfg = cfg or MetricConfig()
    metric = ChrfPP(cfg)
    stats = metric.item_stats(hset.items)
    return metric.finalize(stats.sum(axis=0)), metric.sentence_scores(stats)


def bleu(hset: HypothesisSet, cfg: MetricConfig | None = None) -> float:
    cfg = cfg or MetricConfig()
    return Bleu(cfg).corpus_score(hset.items)


def ter(hset: HypothesisSet, cfg: MetricConfig | None = None) -> float:
    cfg = cfg or MetricConfig()
    return Ter(cfg).corpus_score(hset.items)
