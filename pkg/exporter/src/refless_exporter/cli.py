"""`refless-export`: encode a text corpus into an embedding bundle."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .corpus import Corpus, check_ratings_file, discover_corpus
from .encoders import get_encoder
from .errors import ExporterError
from .split import SPLITTER_ID, split_sentences
from .writer import SentenceExport, SummaryExport, TextExport, TopicExport, write_bundle


def encode_text(path: Path, encoder, where: str) -> TextExport:
    """Split a file into sentences and encode every token of each."""
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ExporterError(f"{where}: cannot read {path}: {exc}") from exc
    sentences = []
    for sentence in split_sentences(raw):
        tokens, vectors = encoder.encode_sentence(sentence)
        if tokens:
            sentences.append(SentenceExport(tokens, vectors))
    if not sentences:
        raise ExporterError(f"{where}: {path.name} contains no encodable sentences")
    return TextExport(sentences)


def export_corpus(corpus: Corpus, encoder) -> list[TopicExport]:
    topics = []
    for topic in corpus.topics:
        where = f"topic {topic.topic_id!r}"
        documents = [
            encode_text(p, encoder, f"{where} document") for p in topic.documents
        ]
        summaries = [
            SummaryExport(
                s.summary_id,
                s.system_id,
                encode_text(s.path, encoder, f"{where} summary"),
            )
            for s in topic.summaries
        ]
        topics.append(TopicExport(topic.topic_id, documents, summaries))
    return topics


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refless-export",
        description="Encode a text corpus into a refless embedding bundle.",
    )
    parser.add_argument("--corpus", required=True, metavar="DIR",
                        help="corpus root (one directory per topic)")
    parser.add_argument("--encoder", default="bert-large-nli-stsb-mean-tokens",
                        metavar="ID",
                        help="sentence-transformers checkpoint, or hash:<dim> "
                             "for the deterministic test encoder")
    parser.add_argument("--out", required=True, metavar="FILE")
    parser.add_argument("--format", choices=["auto", "binary", "json"], default="auto")
    parser.add_argument("--device", default=None, help="torch device for encoding")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        corpus = discover_corpus(args.corpus)
        note = check_ratings_file(corpus)
        encoder = get_encoder(args.encoder, device=args.device)
        topics = export_corpus(corpus, encoder)
        meta = {
            "splitter": SPLITTER_ID,
            "exporter": f"refless-exporter/{__version__}",
        }
        write_bundle(args.out, encoder.encoder_id, encoder.dim, topics, meta,
                     fmt=args.format)
    except ExporterError as exc:
        print(f"refless-export: error: {exc}", file=sys.stderr)
        return 2
    n_docs = sum(len(t.documents) for t in topics)
    n_summs = sum(len(t.summaries) for t in topics)
    print(f"encoder={encoder.encoder_id} dim={encoder.dim} splitter={SPLITTER_ID}")
    print(f"exported {len(topics)} topics, {n_docs} documents, "
          f"{n_summs} summaries -> {args.out}")
    if note:
        print(note)
    return 0


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
