"""Aggregation of run records into comparison reports.

Tables follow the presentation convention ``mean ± std [low--high]``:
mean and sample standard deviation over seeds, bootstrap confidence
interval for chrF++ in brackets.  The per-category chrF++ matrix is
emitted both as JSON and CSV so figures can be produced downstream.
"""

from __future__ import annotations

import io
import csv
from typing import Optional

from .harness import RunRecord
from .metrics.evaluate import ChrfPP, EvalItem, MetricConfig
from .metrics import METRIC_NAMES
from .stats import RunAggregate, aggregate_runs, bootstrap_ci, significance_report


def format_mean_std_ci(
    mean: float,
    std: Optional[float],
    ci_low: Optional[float] = None,
    ci_high: Optional[float] = None,
    digits: int = 1,
) -> str:
    """E.g. ``87.4 ± 0.1 [87.2--87.4]``; std/CI parts appear when known."""
    parts = [f"{mean:.{digits}f}"]
    if std is not None:
        parts.append(f"± {std:.{digits}f}")
    if ci_low is not None and ci_high is not None:
        parts.append(f"[{ci_low:.{digits}f}--{ci_high:.{digits}f}]")
    return " ".join(parts)


def _ok_records(records: list[RunRecord]) -> list[RunRecord]:
    return [r for r in records if r.status == "ok" and r.metrics is not None]


def _group_by_cell(records: list[RunRecord]) -> dict[tuple[str, str], list[RunRecord]]:
    cells: dict[tuple[str, str], list[RunRecord]] = {}
    for record in records:
        cells.setdefault((record.model, record.direction), []).append(record)
    for cell in cells.values():
        cell.sort(key=lambda r: r.seed)
    return cells


def _pooled_items(cell: list[RunRecord]) -> list[EvalItem]:
    items: list[EvalItem] = []
    for record in cell:
        for it in record.items or []:
            items.append(EvalItem(it["hypothesis"], it["reference"], it.get("category", "all")))
    return items


def _chrf_ci(
    cell: list[RunRecord],
    cfg: MetricConfig,
    resamples: int,
    seed: int,
    level: float,
) -> tuple[Optional[float], Optional[float]]:
    items = _pooled_items(cell)
    if not items:
        return None, None
    return bootstrap_ci(items, ChrfPP(cfg), resamples=resamples, level=level, seed=seed)


def significance_by_direction(records: list[RunRecord], alpha: float = 0.05) -> dict[str, dict]:
    """Pairwise tests on per-item sentence chrF++ aligned across models.

    Models are compared over the seeds they all completed; per-seed score
    vectors concatenate in seed order, which keeps pairs aligned because
    every adapter sees the identical test set at a given seed.
    """
    ok = _ok_records(records)
    out: dict[str, dict] = {}
    for direction in sorted({r.direction for r in ok}):
        by_model: dict[str, dict[int, list[float]]] = {}
        for record in (r for r in ok if r.direction == direction):
            by_model.setdefault(record.model, {})[record.seed] = record.metrics.sentence_chrf
        if len(by_model) < 2:
            continue
        shared = sorted(set.intersection(*(set(v) for v in by_model.values())))
        if not shared:
            continue
        vectors = {
            model: [x for seed in shared for x in seeds[seed]]
            for model, seeds in by_model.items()
        }
        out[direction] = significance_report(vectors, direction, alpha=alpha).to_dict()
    return out


def render_report(
    records: list[RunRecord],
    comparisons: Optional[dict[str, dict]] = None,
    metric_config: Optional[MetricConfig] = None,
    bootstrap_resamples: int = 2000,
    bootstrap_seed: int = 42,
    ci_level: float = 0.95,
) -> dict:
    """Build the full report document from run records."""
    ok = _ok_records(records)
    if not ok:
        raise ValueError("no successful run records to report")
    cfg = metric_config or MetricConfig()
    cells = _group_by_cell(ok)

    rows = []
    category_matrix: dict[str, dict[str, float]] = {}
    for (model, direction), cell in sorted(cells.items()):
        seeds = [r.seed for r in cell]
        metrics_out = {}
        for name in METRIC_NAMES:
            agg: RunAggregate = aggregate_runs(
                [getattr(r.metrics, name) for r in cell], metric_name=name
            )
            if name == "chrf_pp":
                agg.ci_low, agg.ci_high = _chrf_ci(
                    cell, cfg, bootstrap_resamples, bootstrap_seed, ci_level
                )
                agg.ci_level = ci_level
            entry = agg.to_dict()
            entry["formatted"] = format_mean_std_ci(
                agg.mean, agg.std, agg.ci_low, agg.ci_high,
                digits=1 if name in ("chrf_pp", "bleu", "ter") else 2,
            )
            metrics_out[name] = entry
        rows.append(
            {
                "model": model,
                "direction": direction,
                "seeds": seeds,
                "metrics": metrics_out,
            }
        )

        per_cat: dict[str, list[float]] = {}
        for record in cell:
            for cat, scores in (record.metrics.per_category or {}).items():
                per_cat.setdefault(cat, []).append(scores["chrf_pp"])
        category_matrix[f"{model}/{direction}"] = {
            cat: sum(vals) / len(vals) for cat, vals in sorted(per_cat.items())
        }

    failed = [
        {"model": r.model, "direction": r.direction, "seed": r.seed, "error": r.error}
        for r in records
        if r.status != "ok"
    ]
    return {
        "rows": rows,
        "per_category_chrf": category_matrix,
        "significance": comparisons if comparisons is not None else significance_by_direction(records),
        "failed_runs": failed,
    }


def category_matrix_csv(report: dict) -> str:
    """Per-category chrF++ matrix as CSV (rows: model/direction)."""
    matrix = report["per_category_chrf"]
    categories = sorted({cat for row in matrix.values() for cat in row})
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["model_direction", *categories])
    for key in sorted(matrix):
        writer.writerow([key] + [f"{matrix[key][c]:.2f}" if c in matrix[key] else "" for c in categories])
    return buf.getvalue()


def report_table(report: dict) -> str:
    """Human-readable summary table, one line per model x direction."""
    headers = ["model", "dir", *METRIC_NAMES]
    lines = []
    table_rows = []
    for row in report["rows"]:
        table_rows.append(
            [row["model"], row["direction"]]
            + [row["metrics"][name]["formatted"] for name in METRIC_NAMES]
        )
    widths = [max(len(str(r[i])) for r in [headers] + table_rows) for i in range(len(headers))]
    for r in [headers] + table_rows:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines)
