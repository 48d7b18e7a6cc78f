"""Tokenizers used by the scoring functions.

``tokenize_13a`` reproduces the mteval-v13a behavior (ASCII-oriented,
used by the standard scorers for parity); ``tokenize_international``
separates Unicode punctuation and symbols, which is the sensible default
for Cyrillic/Arabic text; ``tokenize_tercom`` is the whitespace tokenizer
of the TER procedure.
"""

from __future__ import annotations

import functools
import re
import string
import sys
import unicodedata

_13A_RULES = [
    # ASCII punctuation runs (the "language-dependent" part of mteval).
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    # Period/comma split unless glued to digits on the relevant side.
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
]


def tokenize_13a(line: str) -> list[str]:
    line = line.replace("<skipped>", "")
    line = line.replace("-\n", "").replace("\n", " ")
    if "&" in line:
        line = line.replace("&quot;", '"').replace("&amp;", "&")
        line = line.replace("&lt;", "<").replace("&gt;", ">")
    line = f" {line} "
    for pattern, repl in _13A_RULES:
        line = pattern.sub(repl, line)
    return line.split()


@functools.lru_cache(maxsize=None)
def _property_chars(prefix: str) -> str:
    return "".join(
        chr(x) for x in range(sys.maxunicode) if unicodedata.category(chr(x)).startswith(prefix)
    )


@functools.lru_cache(maxsize=1)
def _intl_rules():
    punct = re.escape(_property_chars("P"))
    symbol = re.escape(_property_chars("S"))
    return (
        (re.compile(f"([^\\d])([{punct}])"), r"\1 \2 "),
        (re.compile(f"([{punct}])([^\\d])"), r" \1 \2"),
        (re.compile(f"([{symbol}])"), r" \1 "),
    )


def tokenize_international(line: str) -> list[str]:
    """mteval-v14 international tokenization.

    Punctuation separates from words unless it sits between digits
    (decimal/thousand separators stay attached); symbols always separate.
    The character classes are built from the Unicode database on first
    use; the sequential substitutions replicate the official scorer,
    cascade quirks included.
    """
    for pattern, repl in _intl_rules():
        line = pattern.sub(repl, line)
    return line.split()


def tokenize_tercom(line: str, case_sensitive: bool = True) -> list[str]:
    if not case_sensitive:
        line = line.lower()
    return line.split()


_PUNCTUATION = set(string.punctuation)


def chrf_word_tokens(line: str) -> list[str]:
    """Whitespace tokens with one leading or trailing ASCII punctuation
    character peeled off, as the chrF++ word-level component defines them."""
    tokens = []
    for w in line.split():
        if len(w) == 1:
            tokens.append(w)
        elif w[-1] in _PUNCTUATION:
            tokens.extend([w[:-1], w[-1]])
        elif w[0] in _PUNCTUATION:
            tokens.extend([w[0], w[1:]])
        else:
            tokens.append(w)
    return tokens


BLEU_TOKENIZERS = {
    "thirteen_a": tokenize_13a,
    "international": tokenize_international,
}
