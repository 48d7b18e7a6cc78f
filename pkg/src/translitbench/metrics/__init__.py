"""Evaluation metrics: chrF++, BLEU, TER, CER, WER and exact match."""

from .edit import cer, levenshtein, wer
from .evaluate import (
    METRIC_NAMES,
    Accuracy,
    Bleu,
    ChrfPP,
    Cer,
    EvalItem,
    HypothesisSet,
    MetricConfig,
    MetricReport,
    PooledMetric,
    Ter,
    Wer,
    bleu,
    build_metrics,
    chrf_pp,
    evaluate,
    exact_match_accuracy,
    ter,
)

__all__ = [
    "METRIC_NAMES",
    "Accuracy",
    "Bleu",
    "Cer",
    "ChrfPP",
    "EvalItem",
    "HypothesisSet",
    "MetricConfig",
    "MetricReport",
    "PooledMetric",
    "Ter",
    "Wer",
    "bleu",
    "build_metrics",
    "cer",
    "chrf_pp",
    "evaluate",
    "exact_match_accuracy",
    "levenshtein",
    "ter",
    "wer",
]
