"""Rule-based sentence splitting.

The splitter identifier (name + version) is recorded in exported bundle
manifests so downstream runs can tell which rules produced the sentence
boundaries.
"""

from __future__ import annotations

import re

SPLITTER_ID = "rulesplit-1"

# Lowercased sentence-final tokens that usually are abbreviations, not ends.
_ABBREVIATIONS = {
    "mr", "mrs", "ms", "dr", "prof", "rev", "gen", "sen", "rep", "st", "sr",
    "jr", "vs", "etc", "approx", "dept", "est", "fig", "no", "inc", "ltd",
    "co", "corp", "mt", "e.g", "i.e", "u.s", "u.k", "u.n", "a.m", "p.m",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct",
    "nov", "dec",
}

_BOUNDARY = re.compile(r"([.!?]+)([\"'””’)\]]*)(\s+|$)")


def split_sentences(text: str) -> list[str]:
    """Split raw text into sentences; blank lines always separate."""
    sentences: list[str] = []
    for block in re.split(r"\n\s*\n", text):
        block = " ".join(block.split())
        if block:
            sentences.extend(_split_block(block))
    return sentences


def _split_block(block: str) -> list[str]:
    out = []
    start = 0
    for match in _BOUNDARY.finditer(block):
        end = match.end(2)
        candidate = block[start:end].strip()
        if not candidate:
            continue
        if match.end(3) < len(block) and not _boundary_ok(candidate, block[match.end(3):]):
            continue
        out.append(candidate)
        start = match.end(3)
    tail = block[start:].strip()
    if tail:
        out.append(tail)
    return out


def _boundary_ok(candidate: str, rest: str) -> bool:
    last_word = candidate.rstrip(".!?\"'””’)]").rsplit(" ", 1)[-1].lower()
    if last_word in _ABBREVIATIONS:
        return False
    if len(last_word) == 1 and last_word.isalpha():
        return False  # single-letter initials like "J."
    # require a plausible sentence opener after the break
    return bool(rest) and (rest[0].isupper() or rest[0].isdigit() or rest[0] in "\"'“‘(")
