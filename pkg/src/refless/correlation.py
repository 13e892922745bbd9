"""Correlation of metric scores with human ratings.

Two protocols: 'topic' computes each coefficient within every topic
across that topic's summaries and then averages over topics (topics with
an undefined coefficient are skipped and reported); 'pooled' computes one
coefficient over all joined (topic, summary) pairs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import RatingsError, UndefinedCorrelationError
from .scoring import ScoreReport

PER_TOPIC_AVERAGE = "topic"
POOLED = "pooled"
PROTOCOLS = (PER_TOPIC_AVERAGE, POOLED)

RATINGS_COLUMNS = ("topic_id", "summary_id", "system_id", "dimension", "score")


@dataclass(frozen=True)
class RatingRecord:
    topic_id: str
    summary_id: str
    system_id: str
    human_score: float
    dimension: str


@dataclass(frozen=True)
class RatingsTable:
    """Human ratings keyed by (topic_id, summary_id, dimension)."""

    records: tuple[RatingRecord, ...]

    def __post_init__(self):
        seen = set()
        for r in self.records:
            key = (r.topic_id, r.summary_id, r.dimension)
            if key in seen:
                raise RatingsError(f"duplicate rating for {key}")
            seen.add(key)

    def dimensions(self) -> list[str]:
        return sorted({r.dimension for r in self.records})

    def for_dimension(self, dimension: str) -> dict[tuple[str, str], float]:
        return {
            (r.topic_id, r.summary_id): r.human_score
            for r in self.records
            if r.dimension == dimension
        }


def load_ratings(path) -> RatingsTable:
    """Read a ratings CSV with header topic_id,summary_id,system_id,dimension,score."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RatingsError(f"cannot read ratings file {path!r}: {exc}") from exc
    reader = csv.DictReader(text.splitlines())
    got = tuple(reader.fieldnames or ())
    missing = [c for c in RATINGS_COLUMNS if c not in got]
    if missing:
        raise RatingsError(
            f"{path}: ratings header misses column(s) {missing}; got {list(got)}"
        )
    records = []
    for n, row in enumerate(reader, start=2):
        try:
            score = float(row["score"])
        except (TypeError, ValueError) as exc:
            raise RatingsError(f"{path}:{n}: non-numeric score {row.get('score')!r}") from exc
        records.append(
            RatingRecord(
                topic_id=row["topic_id"],
                summary_id=row["summary_id"],
                system_id=row["system_id"],
                human_score=score,
                dimension=row["dimension"],
            )
        )
    if not records:
        raise RatingsError(f"{path}: ratings file has no rows")
    return RatingsTable(tuple(records))


@dataclass(frozen=True)
class CorrelationReport:
    protocol: str
    dimension: str
    pearson_r: float | None
    spearman_rho: float | None
    kendall_tau: float | None
    n_topics_used: int
    n_pairs_used: int
    skipped_topics: tuple[str, ...] = ()

    @property
    def defined(self) -> bool:
        return self.pearson_r is not None


# ---------------------------------------------------------------------------
# Coefficients


def _as_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ValueError("x and y must be 1-D sequences of equal length")
    if xa.size < 2:
        raise UndefinedCorrelationError("need at least two observations")
    return xa, ya


def pearson(x, y) -> float:
    """Sample Pearson correlation; undefined when either variance is 0."""
    xa, ya = _as_pair(x, y)
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("zero variance in pearson input")
    return float(np.dot(dx, dy) / np.sqrt(sxx * syy))


def rankdata(x) -> np.ndarray:
    """Fractional ranks (1-based); tied values share the average rank."""
    xa = np.asarray(x, dtype=np.float64)
    order = np.argsort(xa, kind="stable")
    ranks = np.empty(xa.size, dtype=np.float64)
    i = 0
    while i < xa.size:
        j = i
        while j + 1 < xa.size and xa[order[j + 1]] == xa[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Pearson correlation of fractional ranks (average ranks for ties)."""
    xa, ya = _as_pair(x, y)
    try:
        return pearson(rankdata(xa), rankdata(ya))
    except UndefinedCorrelationError:
        raise UndefinedCorrelationError("zero rank variance in spearman input") from None


def _kendall_counts(x, y) -> tuple[int, int, int, int]:
    """Concordant, discordant, tied-in-x-only, tied-in-y-only pair counts."""
    xa, ya = _as_pair(x, y)
    sx = np.sign(xa[:, None] - xa[None, :])
    sy = np.sign(ya[:, None] - ya[None, :])
    upper = np.triu_indices(xa.size, k=1)
    sx, sy = sx[upper], sy[upper]
    product = sx * sy
    concordant = int(np.count_nonzero(product > 0))
    discordant = int(np.count_nonzero(product < 0))
    tied_x_only = int(np.count_nonzero((sx == 0) & (sy != 0)))
    tied_y_only = int(np.count_nonzero((sx != 0) & (sy == 0)))
    return concordant, discordant, tied_x_only, tied_y_only


def kendall_tau_b(x, y) -> float:
    """Tie-corrected Kendall tau: (C - D) / sqrt((C+D+Tx) * (C+D+Ty))."""
    c, d, tx, ty = _kendall_counts(x, y)
    denom = (c + d + tx) * (c + d + ty)
    if denom == 0:
        raise UndefinedCorrelationError("all pairs tied in kendall input")
    return (c - d) / np.sqrt(denom)


def kendall_tau_a(x, y) -> float:
    """Plain Kendall tau: (C - D) / (n * (n - 1) / 2), no tie correction."""
    xa, _ = _as_pair(x, y)
    c, d, tx, ty = _kendall_counts(x, y)
    if c + d + tx == 0 or c + d + ty == 0:
        raise UndefinedCorrelationError("all pairs tied in kendall input")
    n0 = xa.size * (xa.size - 1) // 2
    return (c - d) / n0


def kendall_tau(x, y, variant: str = "b") -> float:
    if variant == "b":
        return kendall_tau_b(x, y)
    if variant == "a":
        return kendall_tau_a(x, y)
    raise ValueError(f"unknown kendall variant {variant!r}")


# ---------------------------------------------------------------------------
# Protocols


def _join(
    scores: Iterable[ScoreReport], by_key: dict[tuple[str, str], float]
) -> list[tuple[str, float, float]]:
    """(topic_id, metric, human) triples for valid reports with a rating."""
    joined = []
    for report in scores:
        if not report.valid:
            continue
        key = (report.topic_id, report.summary_id)
        if key in by_key:
            joined.append((report.topic_id, report.final, by_key[key]))
    return joined


def _coefficients(x: Sequence[float], y: Sequence[float], kendall_variant: str):
    return (
        pearson(x, y),
        spearman(x, y),
        kendall_tau(x, y, kendall_variant),
    )


def correlate(
    scores: Sequence[ScoreReport],
    ratings: RatingsTable,
    protocol: str,
    dimension: str,
    kendall_variant: str = "b",
) -> CorrelationReport:
    """Correlate metric final scores with one human-rating dimension."""
    if protocol not in PROTOCOLS:
        raise ValueError(f"protocol must be one of {PROTOCOLS}, got {protocol!r}")
    joined = _join(scores, ratings.for_dimension(dimension))
    if not joined:
        raise RatingsError(
            f"no (topic, summary) overlap between scores and ratings "
            f"for dimension {dimension!r}"
        )

    if protocol == POOLED:
        x = [m for _, m, _ in joined]
        y = [h for _, _, h in joined]
        try:
            r, rho, tau = _coefficients(x, y, kendall_variant)
        except UndefinedCorrelationError:
            r = rho = tau = None
        return CorrelationReport(
            protocol=protocol,
            dimension=dimension,
            pearson_r=r,
            spearman_rho=rho,
            kendall_tau=tau,
            n_topics_used=len({t for t, _, _ in joined}),
            n_pairs_used=len(joined),
        )

    by_topic: dict[str, list[tuple[float, float]]] = {}
    for topic_id, m, h in joined:
        by_topic.setdefault(topic_id, []).append((m, h))

    sums = [0.0, 0.0, 0.0]
    used = 0
    pairs_used = 0
    skipped = []
    for topic_id in sorted(by_topic):
        pairs = by_topic[topic_id]
        x = [m for m, _ in pairs]
        y = [h for _, h in pairs]
        try:
            coeffs = _coefficients(x, y, kendall_variant)
        except UndefinedCorrelationError:
            skipped.append(topic_id)
            continue
        for i, c in enumerate(coeffs):
            sums[i] += c
        used += 1
        pairs_used += len(pairs)
    if used == 0:
        return CorrelationReport(
            protocol=protocol,
            dimension=dimension,
            pearson_r=None,
            spearman_rho=None,
            kendall_tau=None,
            n_topics_used=0,
            n_pairs_used=0,
            skipped_topics=tuple(skipped),
        )
    return CorrelationReport(
        protocol=protocol,
        dimension=dimension,
        pearson_r=sums[0] / used,
        spearman_rho=sums[1] / used,
        kendall_tau=sums[2] / used,
        n_topics_used=used,
        n_pairs_used=pairs_used,
        skipped_topics=tuple(skipped),
    )
