"""Hybrid representations, centrality weights, and the weighted relevance score.

A text's hybrid representation concatenates its kept token vectors with
its (max-pooled) sentence vectors. Pseudo-reference elements carry
centrality-derived weights: each token inherits the normalized centrality
of its sentence, the sentence entries keep their own, and the combined
vector is normalized to sum 1. Relevance between a summary and a pseudo
reference is a weighted greedy-matching score; per-document scores are
averaged over the document set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .bundle import TextRecord
from .centrality import PseudoReferenceSelection
from .errors import ConfigError, DegenerateRepresentationError

F_MODES = ("f1", "fbeta")


@dataclass(frozen=True)
class RelevanceConfig:
    f_mode: str = "f1"
    gamma: int = 2
    centrality_weighting: bool = True
    hybrid: bool = True

    def __post_init__(self):
        if self.f_mode not in F_MODES:
            raise ConfigError(f"f_mode must be one of {F_MODES}, got {self.f_mode!r}")
        if self.gamma < 1:
            raise ConfigError(f"gamma must be a positive integer, got {self.gamma}")


@dataclass(frozen=True, eq=False)
class HybridRep:
    """Token-then-sentence vector list for one text.

    token_sentence_index maps each token element to the position of its
    source sentence within this representation's sentence list.
    """

    elements: np.ndarray  # (n_tokens + n_sentences, dim)
    n_tokens: int
    n_sentences: int
    token_sentence_index: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.n_tokens + self.n_sentences


@dataclass(frozen=True, eq=False)
class CentralityWeights:
    """Raw token/sentence weights and the combined, sum-1 weight vector."""

    token_weights_raw: np.ndarray
    sentence_weights_raw: np.ndarray
    combined: np.ndarray


def assemble_hybrid(
    text: TextRecord,
    kept_token_indices: Sequence[Sequence[int]],
    sentence_vectors,
    hybrid: bool = True,
) -> HybridRep:
    """Concatenate kept token vectors (document order) with sentence vectors.

    With hybrid=False the sentence vectors are omitted. A sentence whose
    tokens were all filtered still contributes its sentence vector. Raises
    DegenerateRepresentationError when nothing remains at all.
    """
    if not text.sentences:
        raise DegenerateRepresentationError("text has no sentences")
    if len(kept_token_indices) != len(text.sentences):
        raise ValueError("kept_token_indices must align with text.sentences")
    parts = []
    token_sent = []
    for s, (sent, kept) in enumerate(zip(text.sentences, kept_token_indices)):
        if len(kept):
            parts.append(sent.vectors[list(kept)])
            token_sent.extend([s] * len(kept))
    n_tokens = len(token_sent)

    sent_arr = np.asarray(sentence_vectors, dtype=np.float64)
    if sent_arr.ndim != 2 or sent_arr.shape[0] != len(text.sentences):
        raise ValueError("sentence_vectors must align with text.sentences")
    n_sentences = 0
    if hybrid:
        parts.append(sent_arr)
        n_sentences = sent_arr.shape[0]

    if n_tokens + n_sentences == 0:
        raise DegenerateRepresentationError(
            "no kept tokens and sentence-level elements disabled"
        )
    elements = np.ascontiguousarray(np.concatenate(parts, axis=0))
    elements.setflags(write=False)
    return HybridRep(elements, n_tokens, n_sentences, tuple(token_sent))


def combine_weights(
    selection: PseudoReferenceSelection,
    ref_rep: HybridRep,
    centrality_weighting: bool = True,
) -> CentralityWeights:
    """Derive the combined weight vector over a pseudo reference's elements.

    ref_rep must have been assembled from exactly the selected sentences,
    so token_sentence_index addresses selection.normalized_centrality.
    With centrality_weighting=False the combined vector is uniform.
    """
    if ref_rep.n_sentences not in (0, len(selection)):
        raise ValueError("ref_rep sentence count disagrees with the selection")
    a_s_all = np.asarray(selection.normalized_centrality, dtype=np.float64)
    token_raw = a_s_all[list(ref_rep.token_sentence_index)]
    sent_raw = a_s_all if ref_rep.n_sentences else np.empty(0)

    if centrality_weighting:
        concat = np.concatenate([token_raw, sent_raw])
        total = concat.sum()
        if total <= 0.0:
            raise ValueError(
                "raw centrality weights sum to zero; cannot normalize "
                "(all kept tokens stem from zero-weight sentences)"
            )
        combined = concat / total
    else:
        combined = np.full(ref_rep.size, 1.0 / ref_rep.size)
    combined.setflags(write=False)
    return CentralityWeights(token_raw, sent_raw, combined)


def weighted_match(
    ref: HybridRep, weights: CentralityWeights, summ: HybridRep
) -> tuple[float, float]:
    """Weighted greedy-matching recall and precision between vector sets.

    recall = sum_i a_i * max_j Sim(r_i, x_j) / sum_i a_i
    precision = sum_j max_i Sim(r_i, x_j) / |X|

    The recall denominator is written out so the score is also correct
    for unnormalized weight vectors.
    """
    if ref.elements.shape[1] != summ.elements.shape[1]:
        raise ValueError(
            f"dimension mismatch: reference dim {ref.elements.shape[1]} "
            f"!= summary dim {summ.elements.shape[1]}"
        )
    row_max, col_max = kernels.match_maxima(ref.elements, summ.elements)
    a = weights.combined
    recall = float(np.dot(a, row_max) / a.sum())
    precision = float(col_max.sum() / summ.size)
    # the quotients can overshoot by one ulp; the contract is [-1, 1]
    return min(1.0, max(-1.0, recall)), min(1.0, max(-1.0, precision))


def beta_square(ref_size: int, summ_size: int, gamma: int) -> float:
    """Adaptive recall weight: (ref_size/summ_size)^(1/gamma) clamped to [1, 2].

    Grows with the pseudo-reference/summary length ratio so that short
    summaries of long references are scored with extra emphasis on recall.
    """
    if ref_size < 1 or summ_size < 1:
        raise ValueError("element counts must be >= 1")
    if gamma < 1:
        raise ConfigError(f"gamma must be a positive integer, got {gamma}")
    # the case conditions compare integer counts, so decide them exactly
    # in integer arithmetic instead of through floating pow
    if ref_size <= summ_size:
        return 1.0
    if ref_size >= summ_size * 2**gamma:
        return 2.0
    return min(2.0, max(1.0, (ref_size / summ_size) ** (1.0 / gamma)))


def f_measure(recall: float, precision: float, beta_sq: float) -> float:
    """(1 + beta_sq) * R * P / (R + beta_sq * P); 0 when the denominator is 0.

    beta_sq = 1 gives the plain F1 harmonic mean.
    """
    denom = recall + beta_sq * precision
    if denom == 0.0:
        return 0.0
    return (1.0 + beta_sq) * recall * precision / denom


def relevance_score(
    summary: HybridRep,
    refs: Sequence[tuple[HybridRep, CentralityWeights]],
    config: RelevanceConfig,
) -> float:
    """Mean per-document F score between the summary and each pseudo reference.

    In fbeta mode the recall weight is recomputed per document from that
    pair's element counts. Documents are reduced in index order.
    """
    if not refs:
        raise ValueError("relevance_score requires at least one pseudo reference")
    total = 0.0
    for ref_rep, weights in refs:
        recall, precision = weighted_match(ref_rep, weights, summary)
        if config.f_mode == "fbeta":
            bsq = beta_square(ref_rep.size, summary.size, config.gamma)
        else:
            bsq = 1.0
        total += f_measure(recall, precision, bsq)
    return total / len(refs)
