"""Self-referenced redundancy: how much of a summary repeats itself."""

from __future__ import annotations

from . import kernels
from .relevance import HybridRep


def redundancy_score(summary: HybridRep) -> float:
    """Average over elements of the maximum similarity to any OTHER element.

    The diagonal is masked: an element is never matched with itself.
    Because the candidate and reference sets coincide and weighting is
    uniform, the recall, precision, and F1 readings of this quantity are
    identical, so a single average suffices. Lower is better. A summary
    with fewer than two elements has no pair to compare and scores 0.
    """
    if summary.size < 2:
        return 0.0
    maxima = kernels.self_masked_maxima(summary.elements)
    return float(maxima.sum() / summary.size)
