"""Benchmarking toolkit for Tajik-Farsi transliteration."""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    CorpusStats,
    ParallelPair,
    SplitSpec,
    compute_stats,
    dedup,
    filter_pair,
    load_jsonl,
    normalize_text,
    save_jsonl,
    stratified_sample,
    stratified_split,
)
from .metrics import EvalItem, HypothesisSet, MetricConfig, MetricReport, evaluate
from .stats import aggregate_runs, bootstrap_ci, paired_t_test, wilcoxon_signed_rank
from .translit import MappingTable, builtin_table, load_mapping, transliterate

__all__ = [
    "Corpus",
    "CorpusStats",
    "EvalItem",
    "HypothesisSet",
    "MappingTable",
    "MetricConfig",
    "MetricReport",
    "ParallelPair",
    "SplitSpec",
    "aggregate_runs",
    "bootstrap_ci",
    "builtin_table",
    "compute_stats",
    "dedup",
    "evaluate",
    "filter_pair",
    "load_jsonl",
    "load_mapping",
    "normalize_text",
    "paired_t_test",
    "save_jsonl",
    "stratified_sample",
    "stratified_split",
    "transliterate",
    "wilcoxon_signed_rank",
]
