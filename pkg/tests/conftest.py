import json
from pathlib import Path

import pytest

from translitbench.corpus import Corpus, ParallelPair
from translitbench.metrics import EvalItem

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "translitbench" / "data"


@pytest.fixture(scope="session")
def golden_items() -> list[EvalItem]:
    items = []
    with open(DATA_DIR / "golden30.jsonl", encoding="utf-8") as fh:
        for line in fh:
            doc = json.loads(line)
            items.append(EvalItem(doc["hypothesis"], doc["reference"], doc["category"]))
    return items


@pytest.fixture(scope="session")
def golden_scores() -> dict:
    with open(DATA_DIR / "golden30_scores.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def sample_corpus_path() -> Path:
    return DATA_DIR / "sample_corpus_1k.jsonl"


def make_corpus(spec: dict[str, int], tag: str = "c") -> Corpus:
    """Corpus with the given {category: count}; pair texts are unique."""
    pairs = []
    for cat, count in spec.items():
        for i in range(count):
            pairs.append(ParallelPair(f"т{tag}{cat}{i}", f"ف{tag}{cat}{i}", cat))
    return Corpus(pairs=pairs, provenance="synthetic")
