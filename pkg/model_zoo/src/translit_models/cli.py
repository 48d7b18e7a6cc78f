"""`translit-models` command line: train / predict, adapter-protocol compatible.

Predict is what the benchmark harness invokes:
``translit-models predict --ckpt best.pt --in {input} --out {output}``.
"""

from __future__ import annotations

import argparse
import json
import sys

from .data import DIRECTIONS
from .predict import CheckpointError, predict
from .spec import FROM_SCRATCH_ARCHS, ModelSpec
from .train import TrainingDiverged, train


def _parse_hp(values: list[str]) -> dict:
    out: dict = {}
    for item in values:
        if "=" not in item:
            raise ValueError(f"--hp expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _cmd_train(args) -> int:
    hp = _parse_hp(args.hp)
    if args.epochs is not None:
        hp["epochs"] = args.epochs
    if args.batch_size is not None:
        hp["batch_size"] = args.batch_size
    spec = ModelSpec(arch=args.arch, hyperparameters=hp)
    log = train(
        spec,
        train_file=args.train,
        valid_file=args.valid,
        direction=args.direction,
        seed=args.seed,
        out_dir=args.out_dir,
        progress=lambda msg: print(msg, file=sys.stderr),
    )
    print(json.dumps({
        "out_dir": args.out_dir,
        "best_epoch": log["best_epoch"],
        "best_valid_loss": log["best_valid_loss"],
        "wall_seconds": log["wall_seconds"],
    }))
    return 0


def _cmd_predict(args) -> int:
    n = predict(args.ckpt, args.infile, args.out, batch_size=args.batch_size)
    print(json.dumps({"out": args.out, "lines": n}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="translit-models", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a from-scratch model")
    p.add_argument("--arch", choices=FROM_SCRATCH_ARCHS, required=True)
    p.add_argument("--train", required=True, help="training pairs (corpus JSONL)")
    p.add_argument("--valid", required=True, help="validation pairs (corpus JSONL)")
    p.add_argument("--direction", choices=DIRECTIONS, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--epochs", type=int, help=f"override the per-arch default")
    p.add_argument("--batch-size", type=int)
    p.add_argument("--hp", action="append", default=[],
                   help="hyperparameter override, key=value (repeatable)")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="greedy inference over a line file")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=128)
    p.set_defaults(func=_cmd_predict)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CheckpointError, TrainingDiverged) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
