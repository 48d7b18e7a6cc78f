import json
import random
from pathlib import Path

import pytest

# Source characters and their cipher targets: a 1:1 Cyrillic->Arabic letter
# permutation, exactly learnable by any of the from-scratch models.
CIPHER_SRC = "абвгдежзиклмнопрстуф"
CIPHER_TGT = "ابوگدهژزیکلمنآپرستوف"
assert len(CIPHER_SRC) == len(set(CIPHER_SRC))

_CONSONANTS = "бвгғджзйкқлмнпрстфхҳчҷш"
_VOWELS = "аеиоуӣӯ"
_CONS_MAP = {
    "б": "ب", "в": "و", "г": "گ", "ғ": "غ", "д": "د", "ж": "ژ", "з": "ز",
    "й": "ی", "к": "ک", "қ": "ق", "л": "ل", "м": "م", "н": "ن", "п": "پ",
    "р": "ر", "с": "س", "т": "ت", "ф": "ف", "х": "خ", "ҳ": "ه", "ч": "چ",
    "ҷ": "ج", "ш": "ش",
}
_VOWEL_MAP = {
    "а": ("ا", "", "ه"),
    "е": ("ا", "", "ه"),
    "и": ("ا", "", "ی"),
    "о": ("آ", "ا", "ا"),
    "у": ("ا", "", "و"),
    "ӣ": ("ای", "ی", "ی"),
    "ӯ": ("او", "و", "و"),
}


def cipher_encode(word: str) -> str:
    table = dict(zip(CIPHER_SRC, CIPHER_TGT))
    return "".join(table.get(ch, ch) for ch in word)


def make_cipher_corpus(path: Path, n_pairs: int, seed: int = 11, min_len: int = 4, max_len: int = 8) -> None:
    rng = random.Random(seed)
    seen = set()
    with open(path, "w", encoding="utf-8") as fh:
        written = 0
        while written < n_pairs:
            word = "".join(rng.choice(CIPHER_SRC) for _ in range(rng.randint(min_len, max_len)))
            if word in seen:
                continue
            seen.add(word)
            fh.write(json.dumps(
                {"tajik": word, "farsi": cipher_encode(word), "category": "cipher"},
                ensure_ascii=False,
            ) + "\n")
            written += 1


def vowel_drop_word(word: str) -> str:
    out = []
    last = len(word) - 1
    for i, ch in enumerate(word):
        if ch in _CONS_MAP:
            out.append(_CONS_MAP[ch])
        elif ch in _VOWEL_MAP:
            initial, medial, final = _VOWEL_MAP[ch]
            out.append(initial if i == 0 else final if i == last else medial)
        else:
            out.append(ch)
    return "".join(out)


def make_contextual_corpus(path: Path, n_pairs: int, seed: int = 23, max_words: int = 2) -> None:
    """Pairs whose Farsi side drops medial short vowels: a context-free
    character map cannot invert this, a trained model can.  Word/short
    phrase pairs, like the lexical categories of the real corpus."""
    rng = random.Random(seed)

    def word():
        parts = []
        for _ in range(rng.randint(1, 2)):
            parts.append(rng.choice(_CONSONANTS))
            parts.append(rng.choice(_VOWELS))
            if rng.random() < 0.2:
                parts.append(rng.choice(_CONSONANTS))
        return "".join(parts)

    vocab = [word() for _ in range(400)]
    seen = set()
    with open(path, "w", encoding="utf-8") as fh:
        written = 0
        while written < n_pairs:
            tajik = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, max_words)))
            if tajik in seen:
                continue
            seen.add(tajik)
            farsi = " ".join(vowel_drop_word(w) for w in tajik.split())
            fh.write(json.dumps(
                {"tajik": tajik, "farsi": farsi, "category": "synthetic"},
                ensure_ascii=False,
            ) + "\n")
            written += 1


@pytest.fixture()
def tiny_corpus(tmp_path) -> dict[str, Path]:
    train = tmp_path / "train.jsonl"
    valid = tmp_path / "valid.jsonl"
    make_cipher_corpus(train, 120, seed=1)
    make_cipher_corpus(valid, 30, seed=2)
    return {"train": train, "valid": valid, "dir": tmp_path}


TINY_HP = {
    "layers": 1,
    "embed_dim": 32,
    "hidden_dim": 64,
    "heads": 2,
    "batch_size": 32,
    "epochs": 2,
    "max_len": 64,
}
