"""Bundle writing: the interchange format consumed by the refless scorer.

This is an independent implementation of the documented format (see the
scorer README "Bundle format"): a UTF-8 ``key=value`` manifest terminated
by a blank line, then little-endian records with length-prefixed UTF-8
strings, u32 counts, and float32 vectors row-major. A JSON variant is
written for ``.json`` outputs.
"""

from __future__ import annotations

import io
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ExporterError

MAGIC = "EMBND/1 binary"
FORMAT_TAG = "EMBND/1"

_U32 = struct.Struct("<I")


@dataclass(frozen=True)
class SentenceExport:
    tokens: list[str]
    vectors: np.ndarray  # (n_tokens, dim) float32


@dataclass(frozen=True)
class TextExport:
    sentences: list[SentenceExport]


@dataclass(frozen=True)
class SummaryExport:
    summary_id: str
    system_id: str
    text: TextExport


@dataclass(frozen=True)
class TopicExport:
    topic_id: str
    documents: list[TextExport]
    summaries: list[SummaryExport]


def write_bundle(
    path,
    encoder_id: str,
    dim: int,
    topics: list[TopicExport],
    meta: dict[str, str],
    fmt: str = "auto",
) -> None:
    path = Path(path)
    if fmt == "auto":
        fmt = "json" if path.suffix.lower() == ".json" else "binary"
    if fmt == "binary":
        path.write_bytes(_binary_bytes(encoder_id, dim, topics, meta))
    elif fmt == "json":
        path.write_text(_json_text(encoder_id, dim, topics, meta), encoding="utf-8")
    else:
        raise ExporterError(f"unknown bundle format {fmt!r}")


def _binary_bytes(encoder_id, dim, topics, meta) -> bytes:
    out = io.BytesIO()
    lines = [MAGIC, f"encoder_id={encoder_id}", f"dim={dim}", f"topics={len(topics)}"]
    lines += [f"{k}={meta[k]}" for k in sorted(meta)]
    out.write(("\n".join(lines) + "\n\n").encode("utf-8"))

    def put_str(s: str) -> None:
        raw = s.encode("utf-8")
        out.write(_U32.pack(len(raw)))
        out.write(raw)

    def put_text(text: TextExport) -> None:
        out.write(_U32.pack(len(text.sentences)))
        for sent in text.sentences:
            out.write(_U32.pack(len(sent.tokens)))
            for tok in sent.tokens:
                put_str(tok)
            out.write(np.ascontiguousarray(sent.vectors, dtype="<f4").tobytes())

    for topic in topics:
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


def _json_text(encoder_id, dim, topics, meta) -> str:
    def text_json(text: TextExport) -> dict:
        return {
            "sentences": [
                {
                    "tokens": list(s.tokens),
                    "vectors": np.asarray(s.vectors, dtype=np.float32).tolist(),
                }
                for s in text.sentences
            ]
        }

    doc = {
        "format": FORMAT_TAG,
        "encoder_id": encoder_id,
        "dim": dim,
        "meta": dict(sorted(meta.items())),
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
            for t in topics
        ],
    }
    return json.dumps(doc, indent=1)
