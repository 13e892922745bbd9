"""Token-level encoders.

Two families are supported through one interface:

- ``hash:<dim>`` — a deterministic lexical pseudo-encoder (each token
  string maps to a fixed random vector). No downloads, stable across
  runs; meant for pipeline tests and offline smoke runs.
- any other identifier — a sentence-transformers checkpoint (e.g.
  ``bert-large-nli-stsb-mean-tokens``); token vectors are the model's
  contextual token embeddings with special tokens stripped.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

from .errors import ExporterError


class HashTokenEncoder:
    """Deterministic per-token vectors seeded by the token string."""

    _TOKEN_RE = re.compile(r"\w+(?:'\w+)?|[^\w\s]")

    def __init__(self, dim: int = 32):
        if dim < 1:
            raise ExporterError(f"hash encoder dim must be >= 1, got {dim}")
        self.dim = dim
        self.encoder_id = f"hash:{dim}"

    def tokenize(self, sentence: str) -> list[str]:
        return self._TOKEN_RE.findall(sentence)

    def encode_sentence(self, sentence: str) -> tuple[list[str], np.ndarray]:
        tokens = self.tokenize(sentence)
        vectors = np.empty((len(tokens), self.dim), dtype=np.float32)
        for i, tok in enumerate(tokens):
            seed = int.from_bytes(
                hashlib.sha256(tok.casefold().encode("utf-8")).digest()[:8], "little"
            )
            rng = np.random.default_rng(seed)
            vectors[i] = rng.standard_normal(self.dim, dtype=np.float32)
        return tokens, vectors


class SbertTokenEncoder:
    """Contextual token embeddings from a sentence-transformers checkpoint."""

    def __init__(self, model_name: str, device: str | None = None):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ExporterError(
                "sentence-transformers is not installed; "
                "pip install 'refless-exporter[sbert]'"
            ) from exc
        try:
            self._model = SentenceTransformer(model_name, device=device)
        except Exception as exc:
            raise ExporterError(f"cannot load encoder {model_name!r}: {exc}") from exc
        self.encoder_id = model_name
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def tokenize(self, sentence: str) -> list[str]:
        tokens, _ = self.encode_sentence(sentence)
        return tokens

    def encode_sentence(self, sentence: str) -> tuple[list[str], np.ndarray]:
        tokenizer = self._model.tokenizer
        features = self._model.tokenize([sentence])
        ids = features["input_ids"][0].tolist()
        embeddings = self._model.encode(
            [sentence], output_value="token_embeddings", convert_to_numpy=False
        )[0]
        embeddings = embeddings.detach().cpu().numpy().astype(np.float32)
        n = min(len(ids), embeddings.shape[0])
        ids, embeddings = ids[:n], embeddings[:n]
        mask = tokenizer.get_special_tokens_mask(ids, already_has_special_tokens=True)
        keep = [i for i, special in enumerate(mask) if not special]
        tokens = tokenizer.convert_ids_to_tokens([ids[i] for i in keep])
        return list(tokens), embeddings[keep]


def get_encoder(encoder_id: str, device: str | None = None):
    """Resolve an encoder identifier to an encoder instance."""
    if encoder_id.startswith("hash:"):
        try:
            dim = int(encoder_id.partition(":")[2])
        except ValueError:
            raise ExporterError(f"bad hash encoder id {encoder_id!r} (want hash:<dim>)")
        return HashTokenEncoder(dim)
    if encoder_id == "hash":
        return HashTokenEncoder()
    return SbertTokenEncoder(encoder_id, device=device)
