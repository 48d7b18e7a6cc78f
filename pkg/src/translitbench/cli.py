"""Command-line entry point.

Subcommands: corpus-stats, sample, split, translit, eval, bench,
compare, report.  Errors print one machine-parsable line to stderr,
``error[CODE]: message``; exit codes are 0 (success), 1 (usage or
configuration error), 2 (some runs failed).  With ``--json`` every
subcommand writes a single JSON document to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import CorpusError, SplitSpec, compute_stats, load_jsonl, save_jsonl, stratified_sample, stratified_split
from .harness import HarnessError, RunConfig, load_run_records, run_experiment
from .metrics.evaluate import EvalItem, HypothesisSet, MetricConfig, evaluate
from .reporting import category_matrix_csv, render_report, report_table, significance_by_direction
from .translit import MappingError, builtin_table, load_mapping, transliterate


class _UsageExit(Exception):
    def __init__(self, message: str):
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the CLI contract is exit 1.
    def error(self, message):
        raise _UsageExit(message)


def _fail(code: str, message: str) -> int:
    print(f"error[{code}]: {message}", file=sys.stderr)
    return 1


def _emit(doc: dict, as_json: bool, human: str | None = None) -> None:
    if as_json:
        print(json.dumps(doc, ensure_ascii=False, indent=1))
    elif human is not None:
        print(human)


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _cmd_corpus_stats(args) -> int:
    stats = compute_stats(load_jsonl(args.infile))
    print(json.dumps(stats.to_dict(), ensure_ascii=False, indent=1))
    return 0


def _cmd_sample(args) -> int:
    sampled = stratified_sample(load_jsonl(args.infile), args.n, args.seed)
    save_jsonl(sampled, args.out)
    _emit(
        {"out": args.out, "pairs": len(sampled), "seed": args.seed},
        args.json,
        f"wrote {len(sampled)} pairs to {args.out}",
    )
    return 0


def _cmd_split(args) -> int:
    spec = SplitSpec(
        train_ratio=args.train,
        valid_ratio=args.valid,
        test_ratio=args.test,
        seed=args.seed,
        stratify_by_category=not args.no_stratify,
    )
    train, valid, test = stratified_split(load_jsonl(args.infile), spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sizes = {}
    for name, part in (("train", train), ("valid", valid), ("test", test)):
        save_jsonl(part, out_dir / f"{name}.jsonl")
        sizes[name] = len(part)
    _emit(
        {"out_dir": str(out_dir), "sizes": sizes, "seed": args.seed},
        args.json,
        f"split sizes: {sizes} (seed {args.seed})",
    )
    return 0


def _cmd_translit(args) -> int:
    if args.table:
        table = load_mapping(args.table)
    elif args.direction:
        table = builtin_table(args.direction)
    else:
        return _fail("USAGE", "translit needs --table FILE or --direction tj2fa|fa2tj")
    lines = _read_lines(args.infile)
    converted = [transliterate(line, table) for line in lines]
    with open(args.out, "w", encoding="utf-8") as fh:
        for line in converted:
            fh.write(line + "\n")
    _emit(
        {"out": args.out, "lines": len(converted), "table": table.name, "rules": len(table)},
        args.json,
        f"transliterated {len(converted)} lines with {len(table)} rules -> {args.out}",
    )
    return 0


def _cmd_eval(args) -> int:
    hyps = _read_lines(args.hyp)
    refs = _read_lines(args.ref)
    if len(hyps) != len(refs):
        return _fail("LINE_MISMATCH", f"{len(hyps)} hypothesis lines vs {len(refs)} reference lines")
    if args.cat:
        cats = _read_lines(args.cat)
        if len(cats) != len(hyps):
            return _fail("LINE_MISMATCH", f"{len(cats)} category lines vs {len(hyps)} items")
    else:
        cats = ["all"] * len(hyps)
    if not hyps:
        return _fail("EMPTY_INPUT", "no items to evaluate")
    cfg = MetricConfig(bleu_tokenizer=args.bleu_tokenizer)
    hset = HypothesisSet(
        items=[EvalItem(h, r, c) for h, r, c in zip(hyps, refs, cats)],
        direction=args.direction,
    )
    report = evaluate(hset, cfg).to_dict()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, ensure_ascii=False, indent=1)
    scores = {k: report[k] for k in ("chrf_pp", "bleu", "ter", "cer", "wer", "accuracy")}
    human = "\n".join(f"{k}: {v:.4f}" for k, v in scores.items())
    _emit(report, args.json, human)
    return 0


def _cmd_bench(args) -> int:
    config = RunConfig.from_json_file(args.config)
    progress = None if args.json else lambda msg: print(msg, file=sys.stderr)
    summary = run_experiment(config, force=args.force, progress=progress)
    doc = {
        "records": len(summary.records),
        "invocations": summary.invocations,
        "skipped": summary.skipped,
        "failures": summary.failures,
        "output_dir": config.output_dir,
    }
    _emit(doc, args.json, f"bench: {doc}")
    return 2 if summary.failures else 0


def _cmd_report(args) -> int:
    records = load_run_records(args.dir)
    report = render_report(records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, ensure_ascii=False, indent=1)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(category_matrix_csv(report))
    _emit(report, args.json, report_table(report))
    return 0


def _cmd_compare(args) -> int:
    records = load_run_records(args.dir)
    if not records:
        return _fail("EMPTY_INPUT", f"no run records under {args.dir}")
    doc = significance_by_direction(records, alpha=args.alpha)
    human_lines = []
    for direction, rep in doc.items():
        for pair in rep["pairs"]:
            human_lines.append(
                f"{direction}  {pair['model_a']} vs {pair['model_b']}: "
                f"wilcoxon p={pair['wilcoxon_p']:.4g}, t-test p={pair['ttest_p']:.4g}"
            )
    _emit(doc, args.json, "\n".join(human_lines) or "nothing to compare")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, ensure_ascii=False, indent=1)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="translitbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")

    p = sub.add_parser("corpus-stats", help="descriptive statistics of a JSONL corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_corpus_stats)

    p = sub.add_parser("sample", help="stratified subsample of a corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("split", help="stratified train/valid/test split")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--train", type=float, default=0.8)
    p.add_argument("--valid", type=float, default=0.1)
    p.add_argument("--test", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--no-stratify", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("translit", help="rule-based transliteration of a line file")
    p.add_argument("--table", help="mapping table JSON (overrides --direction)")
    p.add_argument("--direction", choices=("tj2fa", "fa2tj"), help="use the bundled table")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_translit)

    p = sub.add_parser("eval", help="score hypothesis lines against references")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--cat", help="optional category label per line")
    p.add_argument("--direction", choices=("tj2fa", "fa2tj"), default="tj2fa")
    p.add_argument("--bleu-tokenizer", choices=("international", "thirteen_a"), default="international")
    p.add_argument("--out", help="write the full report JSON here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="run the experiment grid from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--resume", action="store_true",
                   help="explicitly resume (completed cells are always skipped unless --force)")
    p.add_argument("--force", action="store_true", help="recompute completed cells")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("report", help="aggregate run records into a report")
    p.add_argument("--dir", required=True)
    p.add_argument("--out", help="write report JSON here")
    p.add_argument("--csv", help="write the per-category chrF++ matrix CSV here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("compare", help="pairwise significance tests over run records")
    p.add_argument("--dir", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", help="write comparison JSON here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit as exc:
        print(f"error[USAGE]: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (CorpusError, MappingError, HarnessError) as exc:
        return _fail("CONFIG", str(exc))
    except ValueError as exc:
        return _fail("VALUE", str(exc))
    except OSError as exc:
        return _fail("IO", str(exc))


if __name__ == "__main__":
    sys.exit(main())
