"""Sentence centrality and pseudo-reference selection.

Centrality is a directed degree over the sentence similarity graph with
threshold pruning: edges below a threshold placed between the minimum and
maximum off-diagonal similarity are dropped, and similarities to preceding
and following sentences are weighted separately. The top-M sentences by
centrality form the pseudo reference; their scores are min-max normalized
to [0, 1] over the selected set.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError


@dataclass(frozen=True)
class PacSumParams:
    """Centrality knobs: backward/forward edge weights and pruning position.

    Defaults give plain undirected degree centrality with no pruning.
    """

    lambda_bwd: float = 1.0
    lambda_fwd: float = 1.0
    edge_threshold_beta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.edge_threshold_beta < 1.0:
            raise ConfigError(
                f"edge_threshold_beta must be in [0, 1), got {self.edge_threshold_beta}"
            )


@dataclass(frozen=True, eq=False)
class PseudoReferenceSelection:
    """Selected sentence indices (document order) and their normalized centralities."""

    selected_indices: tuple[int, ...]
    normalized_centrality: np.ndarray  # aligned with selected_indices, values in [0, 1]

    def __len__(self) -> int:
        return len(self.selected_indices)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.selected_indices).encode())
        h.update(self.normalized_centrality.tobytes())
        return h.hexdigest()[:16]


def similarity_matrix(sentence_vectors) -> np.ndarray:
    """Symmetric cosine-similarity matrix over sentence vectors.

    Zero-norm vectors have similarity 0 with everything (including
    themselves); nonzero vectors have an exact 1.0 diagonal.
    """
    arr = np.atleast_2d(np.asarray(sentence_vectors, dtype=np.float64))
    sim = kernels.cosine_matrix(arr, arr)
    sim = (sim + sim.T) * 0.5
    nonzero = np.einsum("ij,ij->i", arr, arr) > 0.0
    sim[np.diag_indices_from(sim)] = np.where(nonzero, 1.0, 0.0)
    return sim


def pacsum_centrality(sim: np.ndarray, params: PacSumParams) -> np.ndarray:
    """Raw centrality of each sentence from a symmetric similarity matrix.

    c_i = lambda_bwd * sum of kept similarities to sentences before i
        + lambda_fwd * sum of kept similarities to sentences after i,
    keeping an edge when its similarity is >= min + beta * (max - min)
    over the off-diagonal entries. A single sentence gets centrality 0.
    """
    sim = np.asarray(sim, dtype=np.float64)
    n = sim.shape[0]
    if n == 1:
        return np.zeros(1)
    off_diag = sim[~np.eye(n, dtype=bool)]
    lo, hi = off_diag.min(), off_diag.max()
    tau = lo + params.edge_threshold_beta * (hi - lo)
    kept = np.where(sim >= tau, sim, 0.0)
    np.fill_diagonal(kept, 0.0)
    bwd = np.tril(kept, -1).sum(axis=1)
    fwd = np.triu(kept, 1).sum(axis=1)
    return params.lambda_bwd * bwd + params.lambda_fwd * fwd


def select_top_m(raw, m: int) -> PseudoReferenceSelection:
    """Pick the min(m, len) highest-centrality sentences as the pseudo reference.

    Ties break toward the earlier sentence; selected indices are returned
    in document order. Scores are min-max normalized over the selected
    set; if all selected scores are equal every normalized score is 1
    (never 0, which would annihilate all downstream weights).
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.size == 0:
        raise ValueError("select_top_m requires at least one centrality score")
    if m < 1:
        raise ConfigError(f"top_m must be >= 1, got {m}")
    k = min(m, raw.size)
    by_score = sorted(range(raw.size), key=lambda i: (-raw[i], i))[:k]
    indices = tuple(sorted(by_score))
    vals = raw[list(indices)]
    lo, hi = vals.min(), vals.max()
    if hi == lo:
        norm = np.ones(k)
    else:
        norm = (vals - lo) / (hi - lo)
    norm.setflags(write=False)
    return PseudoReferenceSelection(indices, norm)
