"""Embedding-bundle interchange format: types, loading, saving.

A bundle holds token-level vectors, token strings, and sentence structure
for every document and summary of a corpus, grouped by topic. Sentence
vectors are never stored; they are always recomputed by `pool_sentence`.

Two on-disk variants share one logical schema:

Binary (bulk corpora)
    A UTF-8 text manifest terminated by a blank line::

        EMBND/1 binary
        encoder_id=<string>
        dim=<int>
        topics=<int>
        <extra provenance keys, preserved in bundle.meta>

    followed by a little-endian body. Strings are length-prefixed
    (u32 byte count + UTF-8 bytes), counts are u32, vectors are 32-bit
    floats. Per topic: topic_id, n_documents, n_summaries, then the
    document text blocks, then per summary (summary_id, system_id, text
    block). A text block is n_sentences, then per sentence n_tokens, the
    token strings, and n_tokens*dim float32 values row-major.

JSON (readable test fixtures)
    One document: ``{"format": "EMBND/1", "encoder_id": ..., "dim": ...,
    "meta": {...}, "topics": [...]}`` with the same nesting, vectors as
    number lists. JSON bundles keep full float64 precision; binary
    bundles quantize to float32 on save.
"""

from __future__ import annotations

import io
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BundleFormatError, DimensionMismatchError, StructuralError

MAGIC_BINARY = b"EMBND/1 binary"
FORMAT_TAG = "EMBND/1"

_U32 = struct.Struct("<I")


@dataclass(frozen=True, eq=False)
class SentenceRecord:
    """One sentence: its token strings and one vector per token."""

    tokens: tuple[str, ...]
    vectors: np.ndarray  # (n_tokens, dim) float64, read-only


@dataclass(frozen=True, eq=False)
class TextRecord:
    """One document or summary text, sentences in document order."""

    sentences: tuple[SentenceRecord, ...]


@dataclass(frozen=True, eq=False)
class SummaryRecord:
    summary_id: str
    system_id: str
    text: TextRecord


@dataclass(frozen=True, eq=False)
class TopicRecord:
    """One evaluation unit: a document set plus the summaries written for it."""

    topic_id: str
    documents: tuple[TextRecord, ...]
    summaries: tuple[SummaryRecord, ...]


@dataclass(frozen=True, eq=False)
class EmbeddingBundle:
    encoder_id: str
    dim: int
    topics: tuple[TopicRecord, ...]
    meta: dict[str, str] = field(default_factory=dict)

    def topic(self, topic_id: str) -> TopicRecord:
        for t in self.topics:
            if t.topic_id == topic_id:
                return t
        raise KeyError(f"unknown topic {topic_id!r}")


def make_sentence(tokens: Sequence[str], vectors) -> SentenceRecord:
    """Build a SentenceRecord from token strings and per-token vectors."""
    arr = np.asarray(vectors, dtype=np.float64)
    if arr.ndim != 2:
        raise StructuralError("sentence vectors must form a 2-D (n_tokens, dim) array")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return SentenceRecord(tokens=tuple(tokens), vectors=arr)


def bundles_equal(a: EmbeddingBundle, b: EmbeddingBundle) -> bool:
    """Field-by-field equality, comparing vectors exactly."""
    if (a.encoder_id, a.dim, a.meta) != (b.encoder_id, b.dim, b.meta):
        return False
    if len(a.topics) != len(b.topics):
        return False
    for ta, tb in zip(a.topics, b.topics):
        if ta.topic_id != tb.topic_id:
            return False
        if len(ta.documents) != len(tb.documents) or len(ta.summaries) != len(tb.summaries):
            return False
        for da, db in zip(ta.documents, tb.documents):
            if not _texts_equal(da, db):
                return False
        for sa, sb in zip(ta.summaries, tb.summaries):
            if (sa.summary_id, sa.system_id) != (sb.summary_id, sb.system_id):
                return False
            if not _texts_equal(sa.text, sb.text):
                return False
    return True


def _texts_equal(a: TextRecord, b: TextRecord) -> bool:
    if len(a.sentences) != len(b.sentences):
        return False
    return all(
        sa.tokens == sb.tokens and np.array_equal(sa.vectors, sb.vectors)
        for sa, sb in zip(a.sentences, b.sentences)
    )


def pool_sentence(token_vectors) -> np.ndarray:
    """Component-wise maximum over all token vectors of a sentence.

    Pooling runs over ALL tokens, stop-words included; token filtering
    applies only to token-level representations, never to pooling.
    """
    arr = np.asarray(token_vectors, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("pool_sentence requires a non-empty list of equal-length vectors")
    return arr.max(axis=0)


def filter_tokens(tokens: Sequence[str], stoplist) -> list[int]:
    """Indices of informative tokens, in order.

    A token is kept when its casefolded form is not in `stoplist` and it
    contains at least one alphanumeric character (which also drops
    punctuation-only tokens). `stoplist` entries must already be
    casefolded; `stopwords.load_stoplist`/`prepare_stoplist` ensure that.
    """
    return [
        i
        for i, tok in enumerate(tokens)
        if tok.casefold() not in stoplist and any(ch.isalnum() for ch in tok)
    ]


# ---------------------------------------------------------------------------
# Validation


def _validate_bundle(bundle: EmbeddingBundle) -> EmbeddingBundle:
    if bundle.dim < 1:
        raise StructuralError(f"dim must be >= 1, got {bundle.dim}")
    if not bundle.topics:
        raise StructuralError("bundle contains no topics")
    for topic in bundle.topics:
        where = f"topic {topic.topic_id!r}"
        if not topic.documents:
            raise StructuralError(f"{where}: no documents")
        if not topic.summaries:
            raise StructuralError(f"{where}: no summaries")
        for d, doc in enumerate(topic.documents):
            _validate_text(doc, bundle.dim, f"{where} document {d}")
        for summ in topic.summaries:
            _validate_text(
                summ.text, bundle.dim, f"{where} summary {summ.summary_id!r}"
            )
    return bundle


def _validate_text(text: TextRecord, dim: int, where: str) -> None:
    if not text.sentences:
        raise StructuralError(f"{where}: empty sentence list")
    for s, sent in enumerate(text.sentences):
        if len(sent.tokens) == 0:
            raise StructuralError(f"{where} sentence {s}: no tokens")
        if sent.vectors.shape[0] != len(sent.tokens):
            raise StructuralError(
                f"{where} sentence {s}: {len(sent.tokens)} tokens but "
                f"{sent.vectors.shape[0]} vectors"
            )
        if sent.vectors.shape[1] != dim:
            raise DimensionMismatchError(
                f"{where} sentence {s}: vector length {sent.vectors.shape[1]} != dim {dim}"
            )


# ---------------------------------------------------------------------------
# Loading


def load_bundle(path) -> EmbeddingBundle:
    """Load and fully validate a bundle file (binary or JSON variant)."""
    data = Path(path).read_bytes()
    if data.startswith(MAGIC_BINARY):
        bundle = _parse_binary(data, str(path))
    elif data.lstrip()[:1] == b"{":
        bundle = _parse_json(data, str(path))
    else:
        raise BundleFormatError(
            f"{path}: not a bundle file (expected '{MAGIC_BINARY.decode()}' or JSON)"
        )
    return _validate_bundle(bundle)


def _parse_binary(data: bytes, path: str) -> EmbeddingBundle:
    header_end = data.find(b"\n\n")
    if header_end < 0:
        raise BundleFormatError(f"{path}: unterminated manifest header")
    try:
        header_lines = data[:header_end].decode("utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise BundleFormatError(f"{path}: manifest is not valid UTF-8: {exc}") from exc

    if header_lines[0] != MAGIC_BINARY.decode():
        raise BundleFormatError(f"{path}: bad magic line {header_lines[0]!r}")
    fields: dict[str, str] = {}
    for line in header_lines[1:]:
        key, sep, value = line.partition("=")
        if not sep:
            raise BundleFormatError(f"{path}: malformed manifest line {line!r}")
        fields[key.strip()] = value
    for required in ("encoder_id", "dim", "topics"):
        if required not in fields:
            raise BundleFormatError(f"{path}: manifest missing {required!r}")
    try:
        dim = int(fields.pop("dim"))
        n_topics = int(fields.pop("topics"))
    except ValueError as exc:
        raise BundleFormatError(f"{path}: non-integer dim/topics in manifest") from exc
    encoder_id = fields.pop("encoder_id")

    reader = _Reader(data, header_end + 2, path)
    topics = []
    for _ in range(n_topics):
        topic_id = reader.string("topic_id")
        n_docs = reader.u32("n_documents")
        n_summs = reader.u32("n_summaries")
        docs = tuple(
            reader.text_block(dim, f"topic {topic_id!r} document {d}")
            for d in range(n_docs)
        )
        summs = []
        for _ in range(n_summs):
            summary_id = reader.string("summary_id")
            system_id = reader.string("system_id")
            text = reader.text_block(dim, f"topic {topic_id!r} summary {summary_id!r}")
            summs.append(SummaryRecord(summary_id, system_id, text))
        topics.append(TopicRecord(topic_id, docs, tuple(summs)))
    reader.expect_eof()
    return EmbeddingBundle(encoder_id, dim, tuple(topics), meta=fields)


class _Reader:
    """Sequential reader for the binary body, raising descriptive errors."""

    def __init__(self, data: bytes, offset: int, path: str):
        self.data = data
        self.pos = offset
        self.path = path

    def _take(self, n: int, what: str) -> bytes:
        end = self.pos + n
        if end > len(self.data):
            raise BundleFormatError(f"{self.path}: truncated while reading {what}")
        chunk = self.data[self.pos : end]
        self.pos = end
        return chunk

    def u32(self, what: str) -> int:
        return _U32.unpack(self._take(4, what))[0]

    def string(self, what: str) -> str:
        length = self.u32(f"{what} length")
        raw = self._take(length, what)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise BundleFormatError(f"{self.path}: {what} is not valid UTF-8") from exc

    def text_block(self, dim: int, where: str) -> TextRecord:
        n_sentences = self.u32(f"{where} sentence count")
        sentences = []
        for s in range(n_sentences):
            n_tokens = self.u32(f"{where} sentence {s} token count")
            tokens = tuple(
                self.string(f"{where} sentence {s} token {t}") for t in range(n_tokens)
            )
            raw = self._take(4 * n_tokens * dim, f"{where} sentence {s} vectors")
            vecs = np.frombuffer(raw, dtype="<f4").astype(np.float64)
            vecs = vecs.reshape(n_tokens, dim)
            sentences.append(make_sentence(tokens, vecs))
        return TextRecord(tuple(sentences))

    def expect_eof(self) -> None:
        if self.pos != len(self.data):
            raise BundleFormatError(
                f"{self.path}: {len(self.data) - self.pos} trailing bytes after last topic"
            )


def _parse_json(data: bytes, path: str) -> EmbeddingBundle:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BundleFormatError(f"{path}: invalid JSON bundle: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise BundleFormatError(f"{path}: missing or wrong 'format' tag (want {FORMAT_TAG!r})")
    try:
        dim = int(doc["dim"])
        encoder_id = str(doc["encoder_id"])
        topics_json = doc["topics"]
        meta = {str(k): str(v) for k, v in doc.get("meta", {}).items()}
        topics = []
        for tj in topics_json:
            docs = tuple(_json_text(x, dim) for x in tj["documents"])
            summs = tuple(
                SummaryRecord(
                    str(sj["summary_id"]),
                    str(sj["system_id"]),
                    _json_text(sj, dim),
                )
                for sj in tj["summaries"]
            )
            topics.append(TopicRecord(str(tj["topic_id"]), docs, summs))
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleFormatError(f"{path}: malformed bundle record: {exc!r}") from exc
    return EmbeddingBundle(encoder_id, dim, tuple(topics), meta=meta)


def _json_text(obj, dim: int) -> TextRecord:
    sentences = []
    for sj in obj["sentences"]:
        tokens = [str(t) for t in sj["tokens"]]
        vectors = np.asarray(sj["vectors"], dtype=np.float64)
        if vectors.size == 0:
            vectors = vectors.reshape(0, dim)
        if vectors.ndim != 2:
            raise ValueError("sentence vectors must be a list of equal-length lists")
        sentences.append(make_sentence(tokens, vectors))
    return TextRecord(tuple(sentences))


# ---------------------------------------------------------------------------
# Saving


def save_bundle(bundle: EmbeddingBundle, path, fmt: str = "auto") -> None:
    """Write a bundle. fmt: 'binary', 'json', or 'auto' (by .json suffix)."""
    _validate_bundle(bundle)
    path = Path(path)
    if fmt == "auto":
        fmt = "json" if path.suffix.lower() == ".json" else "binary"
    if fmt == "binary":
        path.write_bytes(_render_binary(bundle))
    elif fmt == "json":
        path.write_text(_render_json(bundle), encoding="utf-8")
    else:
        raise ValueError(f"unknown bundle format {fmt!r}")


def _render_binary(bundle: EmbeddingBundle) -> bytes:
    out = io.BytesIO()
    manifest = [MAGIC_BINARY.decode()]
    manifest.append(f"encoder_id={bundle.encoder_id}")
    manifest.append(f"dim={bundle.dim}")
    manifest.append(f"topics={len(bundle.topics)}")
    for key in sorted(bundle.meta):
        value = bundle.meta[key]
        if "\n" in key or "\n" in value or "=" in key:
            raise BundleFormatError(f"meta key/value not representable in manifest: {key!r}")
        manifest.append(f"{key}={value}")
    if "\n" in bundle.encoder_id:
        raise BundleFormatError("encoder_id must not contain newlines")
    out.write(("\n".join(manifest) + "\n\n").encode("utf-8"))

    def put_str(s: str) -> None:
        raw = s.encode("utf-8")
        out.write(_U32.pack(len(raw)))
        out.write(raw)

    def put_text(text: TextRecord) -> None:
        out.write(_U32.pack(len(text.sentences)))
        for sent in text.sentences:
            out.write(_U32.pack(len(sent.tokens)))
            for tok in sent.tokens:
                put_str(tok)
            out.write(sent.vectors.astype("<f4").tobytes(order="C"))

    for topic in bundle.topics:
        put_str(topic.topic_id)
        out.write(_U32.pack(len(topic.documents)))
        out.write(_U32.pack(len(topic.summaries)))
        for doc in topic.documents:
            put_text(doc)
        for summ in topic.summaries:
            put_str(summ.summary_id)
            put_str(summ.system_id)
            put_text(summ.text)
    return out.getvalue()


def _render_json(bundle: EmbeddingBundle) -> str:
    def text_json(text: TextRecord) -> dict:
        return {
            "sentences": [
                {"tokens": list(s.tokens), "vectors": s.vectors.tolist()}
                for s in text.sentences
            ]
        }

    doc = {
        "format": FORMAT_TAG,
        "encoder_id": bundle.encoder_id,
        "dim": bundle.dim,
        "meta": dict(sorted(bundle.meta.items())),
        "topics": [
            {
                "topic_id": t.topic_id,
                "documents": [text_json(d) for d in t.documents],
                "summaries": [
                    {
                        "summary_id": s.summary_id,
                        "system_id": s.system_id,
                        **text_json(s.text),
                    }
                    for s in t.summaries
                ],
            }
            for t in bundle.topics
        ],
    }
    return json.dumps(doc, indent=1)
