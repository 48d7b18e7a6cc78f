"""Experiment harness: models x directions x seeds, resumable via JSON.

Each (adapter, direction, seed) cell runs the full pipeline: load,
normalize, filter, dedup, subsample with a fixed sampling seed, split
with the per-run seed, transliterate the test sources through the
adapter, evaluate, and persist a RunRecord under
``<output_dir>/<model>/<direction>/seed_<k>.json``.  Cells whose record
already exists with a matching config hash are skipped, so interrupted
experiments restart where they stopped without repeating adapter work.
"""

from __future__ import annotations

import hashlib
import json
import shlex
import subprocess
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from .corpus import Corpus, SplitSpec, load_jsonl, prepare, stratified_sample, stratified_split
from .metrics.evaluate import EvalItem, HypothesisSet, MetricConfig, MetricReport, evaluate
from .translit import MappingTable, builtin_table, load_mapping, transliterate

ADAPTER_KINDS = ("builtin_rule", "builtin_identity", "external_command")

DEFAULT_SAMPLE_SEED = 42
DEFAULT_TIMEOUT_SECONDS = 3600.0


class HarnessError(ValueError):
    """Configuration problems that abort the whole experiment."""


class AdapterFailure(RuntimeError):
    """One adapter invocation failed; the experiment continues."""


@dataclass(frozen=True)
class ModelAdapter:
    name: str
    kind: str
    command_template: Optional[str] = None
    table_path: Optional[str] = None
    timeout_seconds: float = DEFAULT_TIMEOUT_SECONDS

    def validate(self) -> None:
        if self.kind not in ADAPTER_KINDS:
            raise HarnessError(f"adapter {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == "external_command" and not self.command_template:
            raise HarnessError(f"adapter {self.name!r}: external_command needs command_template")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "command_template": self.command_template,
            "table_path": self.table_path,
            "timeout_seconds": self.timeout_seconds,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelAdapter":
        adapter = cls(
            name=doc["name"],
            kind=doc["kind"],
            command_template=doc.get("command_template"),
            table_path=doc.get("table_path"),
            timeout_seconds=float(doc.get("timeout_seconds", DEFAULT_TIMEOUT_SECONDS)),
        )
        adapter.validate()
        return adapter


@dataclass
class RunConfig:
    corpus_path: str
    output_dir: str
    adapters: list[ModelAdapter]
    directions: list[str]
    seeds: list[int] = field(default_factory=lambda: [42, 43, 44])
    sample_size: Optional[int] = 40000
    sample_seed: int = DEFAULT_SAMPLE_SEED
    train_ratio: float = 0.8
    valid_ratio: float = 0.1
    test_ratio: float = 0.1
    stratify: bool = True
    metric_config: MetricConfig = field(default_factory=MetricConfig)

    def validate(self) -> None:
        if not self.adapters:
            raise HarnessError("config needs at least one adapter")
        if not self.directions:
            raise HarnessError("config needs at least one direction")
        for d in self.directions:
            if d not in ("tj2fa", "fa2tj"):
                raise HarnessError(f"unknown direction {d!r}")
        if not self.seeds or len(set(self.seeds)) != len(self.seeds):
            raise HarnessError("seeds must be non-empty and distinct")
        names = [a.name for a in self.adapters]
        if len(set(names)) != len(names):
            raise HarnessError("adapter names must be unique")
        for adapter in self.adapters:
            adapter.validate()
        self.metric_config.validate()

    def canonical_dict(self) -> dict:
        # output_dir is excluded: where results land must not invalidate them.
        return {
            "corpus_path": self.corpus_path,
            "adapters": [a.to_dict() for a in self.adapters],
            "directions": list(self.directions),
            "seeds": list(self.seeds),
            "sample_size": self.sample_size,
            "sample_seed": self.sample_seed,
            "train_ratio": self.train_ratio,
            "valid_ratio": self.valid_ratio,
            "test_ratio": self.test_ratio,
            "stratify": self.stratify,
            "metric_config": self.metric_config.to_dict(),
        }

    def config_hash(self) -> str:
        canon = json.dumps(self.canonical_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        try:
            split = doc.get("split", {})
            config = cls(
                corpus_path=doc["corpus_path"],
                output_dir=doc["output_dir"],
                adapters=[ModelAdapter.from_dict(a) for a in doc["adapters"]],
                directions=list(doc["directions"]),
                seeds=[int(s) for s in doc.get("seeds", [42, 43, 44])],
                sample_size=doc.get("sample_size", 40000),
                sample_seed=int(doc.get("sample_seed", DEFAULT_SAMPLE_SEED)),
                train_ratio=float(split.get("train_ratio", 0.8)),
                valid_ratio=float(split.get("valid_ratio", 0.1)),
                test_ratio=float(split.get("test_ratio", 0.1)),
                stratify=bool(split.get("stratify_by_category", True)),
                metric_config=MetricConfig.from_dict(doc.get("metric_config", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise HarnessError(f"bad run config: {exc}") from exc
        config.validate()
        return config

    @classmethod
    def from_json_file(cls, path: str | Path) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise HarnessError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc)


@dataclass
class RunRecord:
    model: str
    direction: str
    seed: int
    status: str
    config_hash: str
    timestamp: str
    metrics: Optional[MetricReport] = None
    error: Optional[str] = None
    train_seconds: Optional[float] = None
    infer_ms_per_item: Optional[float] = None
    peak_mem_gb: Optional[float] = None
    items: Optional[list[dict]] = None

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "direction": self.direction,
            "seed": self.seed,
            "status": self.status,
            "config_hash": self.config_hash,
            "timestamp": self.timestamp,
            "metrics": self.metrics.to_dict() if self.metrics else None,
            "error": self.error,
            "train_seconds": self.train_seconds,
            "infer_ms_per_item": self.infer_ms_per_item,
            "peak_mem_gb": self.peak_mem_gb,
            "items": self.items,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunRecord":
        metrics = doc.get("metrics")
        return cls(
            model=doc["model"],
            direction=doc["direction"],
            seed=doc["seed"],
            status=doc["status"],
            config_hash=doc["config_hash"],
            timestamp=doc["timestamp"],
            metrics=MetricReport.from_dict(metrics) if metrics else None,
            error=doc.get("error"),
            train_seconds=doc.get("train_seconds"),
            infer_ms_per_item=doc.get("infer_ms_per_item"),
            peak_mem_gb=doc.get("peak_mem_gb"),
            items=doc.get("items"),
        )


@dataclass
class RunSummary:
    records: list[RunRecord] = field(default_factory=list)
    invocations: int = 0
    skipped: int = 0
    failures: int = 0


def _read_lines(path: Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _write_lines(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def invoke_external(
    adapter: ModelAdapter,
    input_path: Path,
    output_path: Path,
    direction: str,
    seed: int,
) -> tuple[Path, float, float]:
    """Run an external adapter once over the whole input file.

    Returns (output_path, wall_seconds, ms_per_item).  Raises
    AdapterFailure on nonzero exit, timeout, or an output line count that
    does not match the input.
    """
    n_items = len(_read_lines(input_path))
    try:
        command = adapter.command_template.format(
            input=str(input_path), output=str(output_path), direction=direction, seed=seed
        )
    except (KeyError, IndexError) as exc:
        raise AdapterFailure(f"bad command template: {exc}") from exc
    argv = shlex.split(command)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    try:
        proc = subprocess.run(
            argv,
            capture_output=True,
            text=True,
            timeout=adapter.timeout_seconds,
        )
    except subprocess.TimeoutExpired as exc:
        raise AdapterFailure(f"timed out after {adapter.timeout_seconds}s") from exc
    except OSError as exc:
        raise AdapterFailure(f"cannot execute {argv[0]!r}: {exc}") from exc
    wall = time.perf_counter() - started
    if proc.returncode != 0:
        tail = proc.stderr.strip().splitlines()[-3:]
        raise AdapterFailure(f"exit code {proc.returncode}: {' | '.join(tail)}")
    if not output_path.exists():
        raise AdapterFailure("adapter produced no output file")
    produced = len(_read_lines(output_path))
    if produced != n_items:
        raise AdapterFailure(f"line count mismatch: {n_items} inputs, {produced} outputs")
    ms_per_item = wall * 1000.0 / n_items if n_items else 0.0
    return output_path, wall, ms_per_item


class _AdapterRunner:
    """Executes one adapter over a source file; caches loaded rule tables."""

    def __init__(self, adapter: ModelAdapter):
        self.adapter = adapter
        self._tables: dict[str, MappingTable] = {}

    def _table_for(self, direction: str) -> MappingTable:
        if direction not in self._tables:
            if self.adapter.table_path:
                self._tables[direction] = load_mapping(self.adapter.table_path)
            else:
                self._tables[direction] = builtin_table(direction)
        return self._tables[direction]

    def run(self, input_path: Path, output_path: Path, direction: str, seed: int) -> tuple[list[str], float, float]:
        """Returns (hypotheses, wall_seconds, ms_per_item)."""
        kind = self.adapter.kind
        if kind == "external_command":
            _, wall, ms = invoke_external(self.adapter, input_path, output_path, direction, seed)
            return _read_lines(output_path), wall, ms
        sources = _read_lines(input_path)
        started = time.perf_counter()
        if kind == "builtin_identity":
            hyps = list(sources)
        else:
            table = self._table_for(direction)
            hyps = [transliterate(line, table) for line in sources]
        wall = time.perf_counter() - started
        _write_lines(output_path, hyps)
        ms = wall * 1000.0 / len(sources) if sources else 0.0
        return hyps, wall, ms


def _sidecar_metadata(output_path: Path) -> dict:
    # Adapters may self-report training time / peak memory next to their
    # output; the harness cannot measure a child's accelerator memory.
    sidecar = output_path.with_name(output_path.name + ".meta.json")
    if not sidecar.exists():
        return {}
    try:
        with open(sidecar, encoding="utf-8") as fh:
            doc = json.load(fh)
        return doc if isinstance(doc, dict) else {}
    except (OSError, json.JSONDecodeError):
        return {}


def record_path(output_dir: str | Path, model: str, direction: str, seed: int) -> Path:
    return Path(output_dir) / model / direction / f"seed_{seed}.json"


def load_record(path: Path) -> Optional[RunRecord]:
    try:
        with open(path, encoding="utf-8") as fh:
            return RunRecord.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError):
        return None


def load_run_records(output_dir: str | Path) -> list[RunRecord]:
    records = []
    for path in sorted(Path(output_dir).glob("*/*/seed_*.json")):
        record = load_record(path)
        if record is not None:
            records.append(record)
    return records


def prepare_corpus(config: RunConfig) -> Corpus:
    raw = load_jsonl(config.corpus_path)
    if not raw.pairs:
        raise HarnessError(f"corpus {config.corpus_path} is empty")
    clean, _dropped = prepare(raw)
    if not clean.pairs:
        raise HarnessError(f"corpus {config.corpus_path} is empty after filtering")
    n = len(clean.pairs)
    if config.sample_size and config.sample_size < n:
        return stratified_sample(clean, config.sample_size, config.sample_seed)
    return clean


def run_experiment(
    config: RunConfig,
    force: bool = False,
    progress: Optional[Callable[[str], None]] = None,
) -> RunSummary:
    """Run every (adapter, direction, seed) cell, skipping completed ones.

    A cell is complete when its record file exists, parses, carries this
    config's hash, and finished successfully; failed cells are retried.
    ``force=True`` recomputes everything.
    """
    config.validate()
    say = progress or (lambda _msg: None)
    corpus = prepare_corpus(config)
    say(f"prepared corpus: {len(corpus)} pairs")

    out_dir = Path(config.output_dir)
    work_dir = out_dir / "_work"
    cfg_hash = config.config_hash()
    runners = {a.name: _AdapterRunner(a) for a in config.adapters}
    summary = RunSummary()

    for seed in config.seeds:
        spec = SplitSpec(
            train_ratio=config.train_ratio,
            valid_ratio=config.valid_ratio,
            test_ratio=config.test_ratio,
            seed=seed,
            stratify_by_category=config.stratify,
        )
        _train, _valid, test = stratified_split(corpus, spec)
        if not test.pairs:
            raise HarnessError(f"seed {seed}: empty test split")
        for direction in config.directions:
            if direction == "tj2fa":
                sources = [p.tajik for p in test.pairs]
                references = [p.farsi for p in test.pairs]
            else:
                sources = [p.farsi for p in test.pairs]
                references = [p.tajik for p in test.pairs]
            categories = [p.category for p in test.pairs]

            input_path = work_dir / direction / f"seed_{seed}.src.txt"
            _write_lines(input_path, sources)

            for adapter in config.adapters:
                rec_path = record_path(out_dir, adapter.name, direction, seed)
                if not force:
                    existing = load_record(rec_path)
                    if (
                        existing is not None
                        and existing.config_hash == cfg_hash
                        and existing.status == "ok"
                    ):
                        summary.records.append(existing)
                        summary.skipped += 1
                        say(f"skip {adapter.name}/{direction}/seed_{seed} (complete)")
                        continue

                output_path = work_dir / adapter.name / direction / f"seed_{seed}.hyp.txt"
                record = RunRecord(
                    model=adapter.name,
                    direction=direction,
                    seed=seed,
                    status="ok",
                    config_hash=cfg_hash,
                    timestamp=datetime.now(timezone.utc).isoformat(),
                )
                summary.invocations += 1
                try:
                    hyps, _wall, ms = runners[adapter.name].run(input_path, output_path, direction, seed)
                    hset = HypothesisSet(
                        items=[EvalItem(h, r, c) for h, r, c in zip(hyps, references, categories)],
                        direction=direction,
                    )
                    record.metrics = evaluate(hset, config.metric_config)
                    record.infer_ms_per_item = ms
                    record.items = [
                        {"source": s, "hypothesis": h, "reference": r, "category": c}
                        for s, h, r, c in zip(sources, hyps, references, categories)
                    ]
                    meta = _sidecar_metadata(output_path)
                    if "train_seconds" in meta:
                        record.train_seconds = float(meta["train_seconds"])
                    if "peak_mem_gb" in meta:
                        record.peak_mem_gb = float(meta["peak_mem_gb"])
                    say(f"done {adapter.name}/{direction}/seed_{seed}")
                except AdapterFailure as exc:
                    record.status = "failed"
                    record.error = str(exc)
                    summary.failures += 1
                    say(f"FAILED {adapter.name}/{direction}/seed_{seed}: {exc}")

                rec_path.parent.mkdir(parents=True, exist_ok=True)
                with open(rec_path, "w", encoding="utf-8") as fh:
                    json.dump(record.to_dict(), fh, ensure_ascii=False, indent=1)
                summary.records.append(record)

    return summary
