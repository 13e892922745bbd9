"""NumPy implementation of the similarity kernels.

All kernels use the same cosine convention: rows are L2-normalized and a
zero-norm row stays the zero vector, so its similarity with anything is 0.
Results are float64 and deterministic for fixed inputs.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def unit_rows(a: np.ndarray) -> np.ndarray:
    """Return a copy of `a` with each row scaled to unit L2 norm (zero rows kept)."""
    a = np.array(a, dtype=np.float64, order="C", copy=True)
    norms = np.sqrt(np.einsum("ij,ij->i", a, a))
    np.divide(a, norms[:, None], out=a, where=norms[:, None] > 0.0)
    return a


def cosine_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cosine similarities between all rows of `a` and all rows of `b`."""
    s = unit_rows(a) @ unit_rows(b).T
    np.clip(s, -1.0, 1.0, out=s)
    return s


def match_maxima(ref: np.ndarray, summ: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Greedy-matching maxima of the ref-vs-summary cosine matrix.

    Returns (row_max, col_max): row_max[i] is the best summary match for
    reference element i; col_max[j] the best reference match for summary
    element j.
    """
    s = cosine_matrix(ref, summ)
    return s.max(axis=1), s.max(axis=0)


def self_masked_maxima(x: np.ndarray) -> np.ndarray:
    """For each row, the maximum cosine similarity to any OTHER row.

    Requires at least two rows; the diagonal is excluded.
    """
    n = x.shape[0]
    if n < 2:
        raise ValueError("self_masked_maxima needs at least two rows")
    s = cosine_matrix(x, x)
    np.fill_diagonal(s, -np.inf)
    return s.max(axis=1)
