"""Secondary acceptance criteria: toy-scale training and harness interop.

Scoring and corpus handling go through the benchmark package's CLI (its
external interface); nothing here imports translitbench.  Expect roughly
15 minutes of CPU for the whole module.
"""

import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import make_cipher_corpus, make_contextual_corpus

BENCH = [sys.executable, "-m", "translitbench.cli"]
MODELS = [sys.executable, "-m", "translit_models.cli"]


def run(cmd: list[str]) -> str:
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, f"{cmd}: rc={proc.returncode}\n{proc.stderr[-2000:]}"
    return proc.stdout


def eval_chrf(hyp: Path, ref: Path) -> float:
    doc = json.loads(run(BENCH + ["eval", "--hyp", str(hyp), "--ref", str(ref), "--json"]))
    return doc["chrf_pp"]


def write_side_files(split_dir: Path, name: str, out_dir: Path) -> tuple[Path, Path]:
    pairs = [json.loads(l) for l in open(split_dir / f"{name}.jsonl", encoding="utf-8")]
    src = out_dir / f"{name}.src"
    ref = out_dir / f"{name}.ref"
    src.write_text("".join(p["tajik"] + "\n" for p in pairs), encoding="utf-8")
    ref.write_text("".join(p["farsi"] + "\n" for p in pairs), encoding="utf-8")
    return src, ref


def train_g2p(train_file: Path, valid_file: Path, out_dir: Path, epochs: int = 8) -> Path:
    run(
        MODELS
        + [
            "train", "--arch", "g2p_transformer",
            "--train", str(train_file), "--valid", str(valid_file),
            "--direction", "tj2fa", "--seed", "42", "--out-dir", str(out_dir),
            "--epochs", str(epochs), "--batch-size", "32",
        ]
    )
    return out_dir / "best.pt"


@pytest.fixture(scope="session")
def contextual_run(tmp_path_factory) -> dict:
    """4,000-pair positional-vowel corpus, split by the benchmark CLI,
    with a trained G2P checkpoint; shared by criteria 10 and 11."""
    work = tmp_path_factory.mktemp("ctx")
    corpus = work / "corpus.jsonl"
    make_contextual_corpus(corpus, 4000, seed=23)
    run(BENCH + ["split", "--in", str(corpus), "--out-dir", str(work / "split"), "--seed", "42"])
    src, ref = write_side_files(work / "split", "test", work)
    ckpt = train_g2p(work / "split" / "train.jsonl", work / "split" / "valid.jsonl", work / "model")
    return {"work": work, "corpus": corpus, "test_src": src, "test_ref": ref, "ckpt": ckpt}


def test_criterion_9_cipher_convergence(tmp_path):
    corpus = tmp_path / "cipher.jsonl"
    make_cipher_corpus(corpus, 5000, seed=11)
    run(BENCH + ["split", "--in", str(corpus), "--out-dir", str(tmp_path / "split"), "--seed", "42"])
    src, ref = write_side_files(tmp_path / "split", "test", tmp_path)

    started = time.time()
    ckpt = train_g2p(tmp_path / "split" / "train.jsonl", tmp_path / "split" / "valid.jsonl",
                     tmp_path / "model", epochs=8)
    hyp = tmp_path / "test.hyp"
    run(MODELS + ["predict", "--ckpt", str(ckpt), "--in", str(src), "--out", str(hyp)])
    elapsed = time.time() - started
    assert elapsed < 600.0, f"training+decoding took {elapsed:.0f}s"

    chrf = eval_chrf(hyp, ref)
    assert chrf >= 99.0, f"held-out chrF++ {chrf:.2f} < 99"
    print(f"ACCEPTANCE PASS: 9 cipher convergence chrF++ {chrf:.2f} in {elapsed:.0f}s (8 epochs)",
          flush=True)


def test_criterion_10_beats_rule_baseline(contextual_run):
    work = contextual_run["work"]
    src, ref = contextual_run["test_src"], contextual_run["test_ref"]

    base_hyp = work / "baseline.hyp"
    run(BENCH + ["translit", "--direction", "tj2fa", "--in", str(src), "--out", str(base_hyp)])
    baseline_chrf = eval_chrf(base_hyp, ref)

    model_hyp = work / "model.hyp"
    run(MODELS + ["predict", "--ckpt", str(contextual_run["ckpt"]), "--in", str(src),
                  "--out", str(model_hyp)])
    model_chrf = eval_chrf(model_hyp, ref)

    margin = model_chrf - baseline_chrf
    assert margin >= 10.0, f"margin {margin:.2f} < 10 (model {model_chrf:.2f}, rule {baseline_chrf:.2f})"
    print(f"ACCEPTANCE PASS: 10 trained g2p {model_chrf:.2f} vs rule baseline {baseline_chrf:.2f} "
          f"(margin +{margin:.2f})", flush=True)


def test_criterion_11_bench_interop(contextual_run, tmp_path):
    config = {
        "corpus_path": str(contextual_run["corpus"]),
        "output_dir": str(tmp_path / "runs"),
        "adapters": [
            {
                "name": "g2p",
                "kind": "external_command",
                "command_template": (
                    f"{sys.executable} -m translit_models.cli predict "
                    f"--ckpt {contextual_run['ckpt']} --in {{input}} --out {{output}}"
                ),
            }
        ],
        "directions": ["tj2fa"],
        "seeds": [42],
        "sample_size": None,
    }
    config_path = tmp_path / "bench.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    summary = json.loads(run(BENCH + ["bench", "--config", str(config_path), "--json"]))
    assert summary["records"] == 1
    assert summary["failures"] == 0

    record_file = tmp_path / "runs" / "g2p" / "tj2fa" / "seed_42.json"
    record = json.loads(record_file.read_text(encoding="utf-8"))
    assert record["status"] == "ok"
    assert record["model"] == "g2p"
    assert record["infer_ms_per_item"] > 0.0
    assert 0.0 <= record["metrics"]["chrf_pp"] <= 100.0
    assert len(record["metrics"]["sentence_chrf"]) == record["metrics"]["item_count"]
    print(
        "ACCEPTANCE PASS: 11 bench interop RunRecord ok, "
        f"infer {record['infer_ms_per_item']:.2f} ms/item, chrF++ {record['metrics']['chrf_pp']:.2f}",
        flush=True,
    )
