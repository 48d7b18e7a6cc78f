"""Deterministic grapheme-substitution transliteration.

The engine scans left to right and, at each position, applies the longest
matching source grapheme from the table; characters with no rule pass
through unchanged.  Tables are plain JSON data so users can swap in their
own correspondences; the bundled tables implement standard Tajik-Persian
letter mappings (70 rules for tj2fa covering the full upper/lowercase
Tajik alphabet, 47 rules for fa2tj covering the frequent Arabic-script
characters).
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

DIRECTIONS = ("tj2fa", "fa2tj")

_BUILTIN_FILES = {"tj2fa": "mapping_tj2fa.json", "fa2tj": "mapping_fa2tj.json"}
_BUILTIN_RULE_COUNTS = {"tj2fa": 70, "fa2tj": 47}


class MappingError(ValueError):
    """Raised for malformed mapping tables."""


class MappingTable:
    """Ordered substitution rules for one transliteration direction.

    Immutable after construction.  Rules are kept longest-source-first
    (stable within a length) so the scan in :func:`transliterate` can try
    lengths in descending order.
    """

    def __init__(self, direction: str, rules: list[tuple[str, str]], name: str = "", version: str = ""):
        if direction not in DIRECTIONS:
            raise MappingError(f"unknown direction {direction!r}")
        seen: set[str] = set()
        for src, _tgt in rules:
            if src == "":
                raise MappingError("empty source grapheme")
            if src in seen:
                raise MappingError(f"duplicate rule for source {src!r}")
            seen.add(src)
        self.direction = direction
        self.rules = sorted(rules, key=lambda r: -len(r[0]))
        self.name = name
        self.version = version
        self._mapping = dict(self.rules)
        self._lengths = sorted({len(src) for src, _ in self.rules}, reverse=True)

    def __len__(self) -> int:
        return len(self.rules)

    def target_of(self, source: str) -> str | None:
        return self._mapping.get(source)

    @property
    def max_target_len(self) -> int:
        return max((len(t) for _, t in self.rules), default=0)


def load_mapping(path: str | Path) -> MappingTable:
    """Load and validate a mapping table from its JSON file format."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MappingError(f"cannot read mapping table {path}: {exc}") from exc
    try:
        rules = [(r["from"], r["to"]) for r in doc["rules"]]
        return MappingTable(
            direction=doc["direction"],
            rules=rules,
            name=doc.get("name", path.stem),
            version=doc.get("version", ""),
        )
    except (KeyError, TypeError) as exc:
        raise MappingError(f"malformed mapping table {path}: {exc}") from exc


def builtin_table(direction: str) -> MappingTable:
    """The mapping table bundled with the package for `direction`.

    The bundled rule inventories are fixed (70 for tj2fa, 47 for fa2tj)
    and validated here so accidental edits to the data files fail loudly.
    """
    if direction not in DIRECTIONS:
        raise MappingError(f"unknown direction {direction!r}")
    ref = resources.files("translitbench.data") / _BUILTIN_FILES[direction]
    with resources.as_file(ref) as path:
        table = load_mapping(path)
    expected = _BUILTIN_RULE_COUNTS[direction]
    if len(table) != expected:
        raise MappingError(
            f"bundled {direction} table has {len(table)} rules, expected {expected}"
        )
    return table


def transliterate(text: str, table: MappingTable) -> str:
    """Apply the table to text; unmatched scalar values are copied verbatim.

    The input is expected to be normalized already; no normalization
    happens here.
    """
    mapping = table._mapping
    lengths = table._lengths
    out = []
    i = 0
    n = len(text)
    while i < n:
        for length in lengths:
            if length <= n - i:
                chunk = text[i : i + length]
                if chunk in mapping:
                    out.append(mapping[chunk])
                    i += length
                    break
        else:
            out.append(text[i])
            i += 1
    return "".join(out)
