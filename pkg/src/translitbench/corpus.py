"""Parallel corpus loading, normalization, filtering, sampling and splitting.

The corpus file format is UTF-8 JSON Lines, one object per pair:
``{"tajik": str, "farsi": str, "category": str}``.  All operations here
are pure functions of their inputs (plus an explicit seed where noted),
so pipelines are reproducible byte-for-byte.
"""

from __future__ import annotations

import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .rng import Xoshiro256StarStar

DROP_REASONS = ("empty_side", "latin_content", "foreign_script", "length_exceeded")

DEFAULT_MAX_CHARS = 512

# Script block membership used for descriptive statistics.
_CYRILLIC_BLOCK = (0x0400, 0x04FF)
_ARABIC_BLOCK = (0x0600, 0x06FF)

_MULTISPACE_RE = re.compile(" {2,}")


class CorpusError(ValueError):
    """Raised for malformed corpus files or invalid corpus operations."""


@dataclass(frozen=True)
class ParallelPair:
    tajik: str
    farsi: str
    category: str

    def to_dict(self) -> dict:
        return {"tajik": self.tajik, "farsi": self.farsi, "category": self.category}


@dataclass
class Corpus:
    pairs: list[ParallelPair] = field(default_factory=list)
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def categories(self) -> list[str]:
        """Category labels in order of first occurrence."""
        seen: dict[str, None] = {}
        for p in self.pairs:
            seen.setdefault(p.category, None)
        return list(seen)


def normalize_text(raw: str) -> str:
    """Normalize one text segment.

    C0/C1 control characters are removed, every Unicode space separator
    (category Zs) becomes U+0020, runs of spaces collapse to one, the
    result is trimmed and NFC-normalized.  ZWNJ (U+200C) is morphologically
    significant in Persian and passes through untouched.  NFC runs last:
    removing characters can expose composable sequences, and composing at
    the end is what makes the function idempotent.
    """
    out = []
    for ch in raw:
        cat = unicodedata.category(ch)
        if cat == "Cc":
            continue
        out.append(" " if cat == "Zs" else ch)
    text = _MULTISPACE_RE.sub(" ", "".join(out)).strip(" ")
    return unicodedata.normalize("NFC", text)


def _letter_issue(text: str) -> Optional[str]:
    """First filter problem found among the letters of `text`, if any."""
    issue = None
    for ch in text:
        if not unicodedata.category(ch).startswith("L"):
            continue
        name = unicodedata.name(ch, "")
        if name.startswith("LATIN"):
            return "latin_content"
        if not name.startswith(("CYRILLIC", "ARABIC")):
            issue = "foreign_script"
    return issue


def filter_pair(pair: ParallelPair, max_chars: int = DEFAULT_MAX_CHARS) -> tuple[bool, Optional[str]]:
    """Decide whether a normalized pair enters the corpus.

    Returns ``(True, None)`` to keep, or ``(False, reason)`` with reason in
    ``DROP_REASONS``.  Latin letters anywhere take precedence over other
    foreign-script letters, mirroring how the exclusion is reported.
    """
    if not pair.tajik or not pair.farsi:
        return False, "empty_side"
    issues = [_letter_issue(pair.tajik), _letter_issue(pair.farsi)]
    if "latin_content" in issues:
        return False, "latin_content"
    if "foreign_script" in issues:
        return False, "foreign_script"
    if len(pair.tajik) > max_chars or len(pair.farsi) > max_chars:
        return False, "length_exceeded"
    return True, None


def normalize_pair(pair: ParallelPair) -> ParallelPair:
    return ParallelPair(
        tajik=normalize_text(pair.tajik),
        farsi=normalize_text(pair.farsi),
        category=pair.category,
    )


def dedup(corpus: Corpus) -> Corpus:
    """Drop exact (tajik, farsi) duplicates, keeping first occurrences.

    One-sided duplicates survive on purpose: distinct source strings may
    legitimately share a target string.
    """
    seen: set[tuple[str, str]] = set()
    kept = []
    for p in corpus.pairs:
        key = (p.tajik, p.farsi)
        if key in seen:
            continue
        seen.add(key)
        kept.append(p)
    return Corpus(pairs=kept, provenance=corpus.provenance)


def _in_block(ch: str, block: tuple[int, int]) -> bool:
    return block[0] <= ord(ch) <= block[1]


def _side_length_stats(lengths: list[int]) -> dict:
    arr = np.asarray(lengths, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return {
        "mean": float(arr.mean()),
        "std": std,
        "median": float(np.percentile(arr, 50)),
        "p25": float(np.percentile(arr, 25)),
        "p75": float(np.percentile(arr, 75)),
        "max": int(arr.max()),
    }


def _side_word_stats(counts: list[int]) -> dict:
    arr = np.asarray(counts, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return {"mean": float(arr.mean()), "std": std}


@dataclass
class CorpusStats:
    pair_count: int
    unique_tajik: int
    unique_farsi: int
    length_stats: dict
    words_per_string: dict
    char_frequency: dict
    script_chars_per_string: dict

    def to_dict(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "unique_tajik": self.unique_tajik,
            "unique_farsi": self.unique_farsi,
            "length_stats": self.length_stats,
            "words_per_string": self.words_per_string,
            "char_frequency": self.char_frequency,
            "script_chars_per_string": self.script_chars_per_string,
        }


def compute_stats(corpus: Corpus) -> CorpusStats:
    """Descriptive statistics of both corpus sides.

    Lengths are counted in Unicode scalar values, words are maximal
    non-space runs, and the in-script counts use Cyrillic block membership
    for the Tajik side and Arabic block membership for the Farsi side.
    """
    if not corpus.pairs:
        raise CorpusError("cannot compute statistics of an empty corpus")

    sides = {
        "tajik": [p.tajik for p in corpus.pairs],
        "farsi": [p.farsi for p in corpus.pairs],
    }
    blocks = {"tajik": _CYRILLIC_BLOCK, "farsi": _ARABIC_BLOCK}

    length_stats = {}
    words_per_string = {}
    char_frequency = {}
    script_chars = {}
    for side, texts in sides.items():
        length_stats[side] = _side_length_stats([len(t) for t in texts])
        words_per_string[side] = _side_word_stats([len(t.split()) for t in texts])
        freq: Counter[str] = Counter()
        for t in texts:
            freq.update(t)
        char_frequency[side] = dict(freq)
        block = blocks[side]
        in_script = [sum(1 for ch in t if _in_block(ch, block)) for t in texts]
        script_chars[side] = float(np.mean(in_script))

    return CorpusStats(
        pair_count=len(corpus.pairs),
        unique_tajik=len(set(sides["tajik"])),
        unique_farsi=len(set(sides["farsi"])),
        length_stats=length_stats,
        words_per_string=words_per_string,
        char_frequency=char_frequency,
        script_chars_per_string=script_chars,
    )


def _largest_remainder_quotas(populations: dict[str, int], n: int) -> dict[str, int]:
    """Allocate n slots across categories proportionally to population.

    Floors of the exact shares are topped up in order of largest fractional
    remainder (ties broken by larger population, then category name), with
    every quota capped at its population.  Exact arithmetic via Fraction
    keeps the allocation platform-independent.
    """
    total = sum(populations.values())
    if not (0 < n <= total):
        raise CorpusError(f"sample size {n} out of range (corpus has {total} pairs)")
    quotas = {}
    remainders = {}
    for cat, pop in populations.items():
        exact = Fraction(n * pop, total)
        base = min(int(exact), pop)
        quotas[cat] = base
        remainders[cat] = exact - base
    order = sorted(
        populations, key=lambda c: (-remainders[c], -populations[c], c)
    )
    shortfall = n - sum(quotas.values())
    while shortfall > 0:
        progressed = False
        for cat in order:
            if shortfall == 0:
                break
            if quotas[cat] < populations[cat]:
                quotas[cat] += 1
                shortfall -= 1
                progressed = True
        if not progressed:  # unreachable while n <= total; guards a hang
            raise CorpusError("quota allocation failed to converge")
    return quotas


def _indices_by_category(corpus: Corpus) -> dict[str, list[int]]:
    grouped: dict[str, list[int]] = {}
    for i, p in enumerate(corpus.pairs):
        grouped.setdefault(p.category, []).append(i)
    return grouped


def stratified_sample(corpus: Corpus, n: int, seed: int) -> Corpus:
    """Category-stratified sample of n pairs, deterministic per seed.

    Per-category quotas come from largest-remainder allocation; members are
    chosen by a seeded shuffle within each category (categories processed
    in sorted label order so the generator stream is well defined).  The
    sampled pairs keep their original corpus order.
    """
    grouped = _indices_by_category(corpus)
    quotas = _largest_remainder_quotas({c: len(v) for c, v in grouped.items()}, n)
    rng = Xoshiro256StarStar(seed)
    selected: list[int] = []
    for cat in sorted(grouped):
        indices = list(grouped[cat])
        rng.shuffle(indices)
        selected.extend(indices[: quotas[cat]])
    selected.sort()
    return Corpus(
        pairs=[corpus.pairs[i] for i in selected],
        provenance=f"{corpus.provenance} | stratified_sample(n={n}, seed={seed})",
    )


@dataclass(frozen=True)
class SplitSpec:
    train_ratio: float = 0.8
    valid_ratio: float = 0.1
    test_ratio: float = 0.1
    seed: int = 42
    stratify_by_category: bool = True

    def validate(self) -> None:
        ratios = (self.train_ratio, self.valid_ratio, self.test_ratio)
        for r in ratios:
            if not (0.0 < r < 1.0):
                raise CorpusError(f"split ratio {r} outside (0, 1)")
        if abs(sum(ratios) - 1.0) > 1e-9:
            raise CorpusError(f"split ratios {ratios} do not sum to 1")


def _split_counts(size: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    # Largest-remainder over the three splits; remainder ties go to the
    # earlier split (train, then valid, then test).
    exact = [Fraction(r).limit_denominator(10**9) * size for r in ratios]
    base = [int(e) for e in exact]
    rema = [e - b for e, b in zip(exact, base)]
    leftover = size - sum(base)
    for idx in sorted(range(3), key=lambda i: (-rema[i], i)):
        if leftover == 0:
            break
        base[idx] += 1
        leftover -= 1
    return base[0], base[1], base[2]


def stratified_split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus, Corpus]:
    """Partition into (train, valid, test) preserving category proportions.

    Categories with fewer than 3 pairs go entirely to train.  Each split
    keeps the original corpus order.  Disabling stratification treats the
    whole corpus as one category.
    """
    if not corpus.pairs:
        raise CorpusError("cannot split an empty corpus")
    spec.validate()
    ratios = (spec.train_ratio, spec.valid_ratio, spec.test_ratio)

    if spec.stratify_by_category:
        grouped = _indices_by_category(corpus)
    else:
        grouped = {"": list(range(len(corpus.pairs)))}

    rng = Xoshiro256StarStar(spec.seed)
    buckets: tuple[list[int], list[int], list[int]] = ([], [], [])
    for cat in sorted(grouped):
        indices = list(grouped[cat])
        if len(indices) < 3:
            buckets[0].extend(indices)
            continue
        rng.shuffle(indices)
        n_train, n_valid, _ = _split_counts(len(indices), ratios)
        buckets[0].extend(indices[:n_train])
        buckets[1].extend(indices[n_train : n_train + n_valid])
        buckets[2].extend(indices[n_train + n_valid :])

    out = []
    for name, bucket in zip(("train", "valid", "test"), buckets):
        bucket.sort()
        out.append(
            Corpus(
                pairs=[corpus.pairs[i] for i in bucket],
                provenance=f"{corpus.provenance} | split:{name}(seed={spec.seed})",
            )
        )
    return out[0], out[1], out[2]


def prepare(corpus: Corpus, max_chars: int = DEFAULT_MAX_CHARS) -> tuple[Corpus, Counter]:
    """Normalize, filter and deduplicate; returns (corpus, drop reason counts)."""
    dropped: Counter[str] = Counter()
    kept = []
    for pair in corpus.pairs:
        norm = normalize_pair(pair)
        ok, reason = filter_pair(norm, max_chars=max_chars)
        if ok:
            kept.append(norm)
        else:
            dropped[reason] += 1
    return dedup(Corpus(pairs=kept, provenance=corpus.provenance)), dropped


def load_jsonl(path: str | Path) -> Corpus:
    """Read a JSONL corpus file; raises CorpusError with the offending line."""
    pairs = []
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                pairs.append(
                    ParallelPair(
                        tajik=obj["tajik"],
                        farsi=obj["farsi"],
                        category=obj.get("category", "uncategorized"),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CorpusError(f"{path}:{lineno}: bad corpus line ({exc})") from exc
    return Corpus(pairs=pairs, provenance=str(path))


def save_jsonl(corpus: Corpus | Iterable[ParallelPair], path: str | Path) -> None:
    pairs = corpus.pairs if isinstance(corpus, Corpus) else list(corpus)
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            fh.write(json.dumps(p.to_dict(), ensure_ascii=False) + "\n")
