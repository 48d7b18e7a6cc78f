#!/usr/bin/env python3
"""Generate the bundled synthetic Tajik/Farsi sample corpus.

Tajik-looking words are built from CV(C) syllables; the Farsi side is
produced by a position-aware transform (short vowels drop medially, get
an alef carrier initially, and a final vowel letter word-finally), which
mirrors the real information asymmetry between the scripts.  A plain
character-for-character mapping therefore cannot invert it exactly,
keeping the bundled rule baseline honestly imperfect.

Usage: make_sample_corpus.py [--pairs 1000] [--seed 4242] [--out PATH]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from translitbench.rng import Xoshiro256StarStar

CONSONANTS = "бвгғджзйкқлмнпрстфхҳчҷш"
VOWELS = "аеиоуӣӯ"

CONSONANT_MAP = {
    "б": "ب", "в": "و", "г": "گ", "ғ": "غ", "д": "د", "ж": "ژ", "з": "ز",
    "й": "ی", "к": "ک", "қ": "ق", "л": "ل", "м": "م", "н": "ن", "п": "پ",
    "р": "ر", "с": "س", "т": "ت", "ф": "ف", "х": "خ", "ҳ": "ه", "ч": "چ",
    "ҷ": "ج", "ш": "ش",
}

# (word-initial, word-medial, word-final) realizations of each vowel
VOWEL_MAP = {
    "а": ("ا", "", "ه"),
    "е": ("ا", "", "ه"),
    "и": ("ا", "", "ی"),
    "о": ("آ", "ا", "ا"),
    "у": ("ا", "", "و"),
    "ӣ": ("ای", "ی", "ی"),
    "ӯ": ("او", "و", "و"),
}

CATEGORY_PLAN = [
    # (label, share, min_words, max_words)
    ("poetry_parts", 0.472, 3, 7),
    ("masnavi", 0.119, 4, 8),
    ("unique_tajik_words", 0.116, 1, 1),
    ("shahnameh", 0.076, 3, 6),
    ("prose_parts", 0.073, 5, 9),
    ("paranames_per", 0.061, 1, 2),
    ("words", 0.044, 1, 1),
    ("paranames_loc", 0.029, 1, 2),
    ("dr", 0.0025, 2, 5),
    ("jj", 0.0025, 2, 5),
    ("paranames_org", 0.0025, 2, 3),
    ("bbc", 0.0025, 4, 8),
]


def word_to_farsi(word: str) -> str:
    out = []
    last = len(word) - 1
    for i, ch in enumerate(word):
        if ch in CONSONANT_MAP:
            out.append(CONSONANT_MAP[ch])
        elif ch in VOWEL_MAP:
            initial, medial, final = VOWEL_MAP[ch]
            out.append(initial if i == 0 else final if i == last else medial)
        else:
            out.append(ch)
    return "".join(out)


def make_word(rng: Xoshiro256StarStar) -> str:
    syllables = 1 + rng.randbelow(3)
    parts = []
    for _ in range(syllables):
        parts.append(CONSONANTS[rng.randbelow(len(CONSONANTS))])
        parts.append(VOWELS[rng.randbelow(len(VOWELS))])
        if rng.randbelow(5) == 0:
            parts.append(CONSONANTS[rng.randbelow(len(CONSONANTS))])
    return "".join(parts)


def build(pairs_total: int, seed: int):
    rng = Xoshiro256StarStar(seed)
    vocab = [make_word(rng) for _ in range(1200)]
    counts = [int(share * pairs_total) for _, share, _, _ in CATEGORY_PLAN]
    counts[0] += pairs_total - sum(counts)

    seen: set[str] = set()
    rows = []
    for (label, _share, lo, hi), count in zip(CATEGORY_PLAN, counts):
        produced = 0
        while produced < count:
            n_words = lo + rng.randbelow(hi - lo + 1)
            words = [vocab[rng.randbelow(len(vocab))] for _ in range(n_words)]
            tajik = " ".join(words)
            if label == "prose_parts" and rng.randbelow(2) == 0:
                tajik += "."
            if tajik in seen:
                continue  # re-draw; keeps the pair set duplicate-free
            seen.add(tajik)
            farsi = " ".join(word_to_farsi(w) for w in tajik.split())
            rows.append({"tajik": tajik, "farsi": farsi, "category": label})
            produced += 1
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=4242)
    parser.add_argument(
        "--out",
        default=str(
            Path(__file__).resolve().parent.parent
            / "src" / "translitbench" / "data" / "sample_corpus_1k.jsonl"
        ),
    )
    args = parser.parse_args()
    rows = build(args.pairs, args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    shares = {}
    for row in rows:
        shares[row["category"]] = shares.get(row["category"], 0) + 1
    print(f"wrote {len(rows)} pairs to {args.out}")
    print({k: v for k, v in sorted(shares.items(), key=lambda kv: -kv[1])})


if __name__ == "__main__":
    main()
