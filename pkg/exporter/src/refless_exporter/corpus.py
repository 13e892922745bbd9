"""Corpus discovery and validation.

Expected layout (one directory per topic)::

    corpus/
      <topic_id>/
        documents/*.txt
        summaries/*.txt        file stem "system__summary" or plain
      ratings.csv              optional, consumed by the scorer directly

A summary file named ``sysA__s1.txt`` yields system_id "sysA"; the full
stem is the summary_id, which keeps (topic, summary) keys unique. A
plain stem names both. Files are processed in sorted order so exports
are reproducible.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import ExporterError

RATINGS_COLUMNS = ("topic_id", "summary_id", "system_id", "dimension", "score")


@dataclass(frozen=True)
class SummaryFile:
    summary_id: str
    system_id: str
    path: Path


@dataclass(frozen=True)
class CorpusTopic:
    topic_id: str
    documents: tuple[Path, ...]
    summaries: tuple[SummaryFile, ...]


@dataclass(frozen=True)
class Corpus:
    root: Path
    topics: tuple[CorpusTopic, ...]


def _text_files(directory: Path) -> list[Path]:
    return sorted(p for p in directory.glob("*.txt") if p.is_file())


def discover_corpus(root) -> Corpus:
    root = Path(root)
    if not root.is_dir():
        raise ExporterError(f"corpus directory not found: {root}")
    topics = []
    for topic_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        doc_files = _text_files(topic_dir / "documents")
        summ_files = _text_files(topic_dir / "summaries")
        if not doc_files:
            raise ExporterError(f"topic {topic_dir.name!r}: no documents/*.txt files")
        if not summ_files:
            raise ExporterError(f"topic {topic_dir.name!r}: no summaries/*.txt files")
        summaries = []
        for path in summ_files:
            stem = path.stem
            system_id = stem.partition("__")[0] if "__" in stem else stem
            summaries.append(SummaryFile(stem, system_id, path))
        topics.append(CorpusTopic(topic_dir.name, tuple(doc_files), tuple(summaries)))
    if not topics:
        raise ExporterError(f"no topic directories under {root}")
    return Corpus(root, tuple(topics))


def check_ratings_file(corpus: Corpus) -> str | None:
    """Validate <corpus>/ratings.csv header if present; returns a note."""
    path = corpus.root / "ratings.csv"
    if not path.exists():
        return None
    with path.open(encoding="utf-8", newline="") as fh:
        header = tuple(next(csv.reader(fh), ()))
    missing = [c for c in RATINGS_COLUMNS if c not in header]
    if missing:
        raise ExporterError(f"{path}: ratings header misses column(s) {missing}")
    return f"ratings file present: {path}"
