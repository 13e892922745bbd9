"""Per-summary scoring pipeline and the final relevance/redundancy combination.

For each document of a topic: pool sentence vectors, compute centrality,
select the pseudo reference, and derive its hybrid representation and
weights. These per-document artifacts are built once per topic and reused
for every summary of that topic. Each summary is then scored as

    final = (relevance - lambda * redundancy) / (1 + lambda)

with relevance averaged over the topic's documents. Everything is
deterministic: fixed iteration order, reductions in index order.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .bundle import EmbeddingBundle, TextRecord, TopicRecord, filter_tokens, pool_sentence
from .centrality import (
    PacSumParams,
    PseudoReferenceSelection,
    pacsum_centrality,
    select_top_m,
    similarity_matrix,
)
from .errors import ConfigError, ReflessError
from .redundancy import redundancy_score
from .relevance import (
    CentralityWeights,
    HybridRep,
    RelevanceConfig,
    assemble_hybrid,
    combine_weights,
    relevance_score,
)
from .stopwords import DEFAULT_STOPWORDS


@dataclass(frozen=True)
class ScoreConfig:
    """Full scoring configuration with the fixed defaults baked in."""

    redundancy_lambda: float = 0.6
    relevance: RelevanceConfig = field(default_factory=RelevanceConfig)
    pacsum: PacSumParams = field(default_factory=PacSumParams)
    top_m: int = 12
    redundancy_enabled: bool = True
    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    stoplist_path: str | None = None  # provenance only; stopwords carries the words

    def __post_init__(self):
        if not 0.0 < self.redundancy_lambda <= 1.0:
            raise ConfigError(
                f"lambda must be in (0, 1], got {self.redundancy_lambda}"
            )
        if self.top_m < 1:
            raise ConfigError(f"top_m must be >= 1, got {self.top_m}")

    def to_dict(self) -> dict:
        """JSON-ready view of the effective configuration."""
        stop_sha = hashlib.sha256(
            "\n".join(sorted(self.stopwords)).encode("utf-8")
        ).hexdigest()
        return {
            "lambda": self.redundancy_lambda,
            "top_m": self.top_m,
            "redundancy_enabled": self.redundancy_enabled,
            "relevance": {
                "f_mode": self.relevance.f_mode,
                "gamma": self.relevance.gamma,
                "centrality_weighting": self.relevance.centrality_weighting,
                "hybrid": self.relevance.hybrid,
            },
            "pacsum": {
                "lambda_bwd": self.pacsum.lambda_bwd,
                "lambda_fwd": self.pacsum.lambda_fwd,
                "edge_threshold_beta": self.pacsum.edge_threshold_beta,
            },
            "stoplist_path": self.stoplist_path,
            "stoplist_sha256": stop_sha,
        }

    def fingerprint(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class ScoreReport:
    """Scores for one (topic, summary) pair plus configuration provenance.

    For valid reports, final reproduces the linear combination of the
    stored relevance/redundancy (or equals relevance when redundancy is
    disabled in the fingerprinted config). Invalid summaries carry the
    failure in `error` and NaN scores.
    """

    topic_id: str
    summary_id: str
    system_id: str
    relevance: float
    redundancy: float
    final: float
    config_fingerprint: str
    warnings: tuple[str, ...] = ()
    error: str | None = None

    @property
    def valid(self) -> bool:
        return self.error is None


def final_score(rel: float, red: float, lam: float) -> float:
    """Linear combination (rel - lam * red) / (1 + lam)."""
    if not 0.0 < lam <= 1.0:
        raise ConfigError(f"lambda must be in (0, 1], got {lam}")
    return (rel - lam * red) / (1.0 + lam)


@dataclass(frozen=True, eq=False)
class DocumentReference:
    """Pseudo-reference artifacts for one document, reused across summaries."""

    selection: PseudoReferenceSelection
    rep: HybridRep
    weights: CentralityWeights


@dataclass(frozen=True, eq=False)
class TopicContext:
    topic_id: str
    references: tuple[DocumentReference, ...]


def document_sentence_vectors(text: TextRecord) -> list:
    """Max-pooled sentence vectors of a text, in document order."""
    return [pool_sentence(s.vectors) for s in text.sentences]


def select_pseudo_reference(
    doc: TextRecord, pacsum: PacSumParams, top_m: int
) -> PseudoReferenceSelection:
    """Centrality computation and top-M selection for one document."""
    vecs = document_sentence_vectors(doc)
    raw = pacsum_centrality(similarity_matrix(vecs), pacsum)
    return select_top_m(raw, top_m)


def _reference_for_document(doc: TextRecord, config: ScoreConfig) -> DocumentReference:
    vecs = document_sentence_vectors(doc)
    raw = pacsum_centrality(similarity_matrix(vecs), config.pacsum)
    selection = select_top_m(raw, config.top_m)
    sub_text = TextRecord(tuple(doc.sentences[i] for i in selection.selected_indices))
    kept = [filter_tokens(s.tokens, config.stopwords) for s in sub_text.sentences]
    rep = assemble_hybrid(
        sub_text,
        kept,
        [vecs[i] for i in selection.selected_indices],
        hybrid=config.relevance.hybrid,
    )
    weights = combine_weights(selection, rep, config.relevance.centrality_weighting)
    return DocumentReference(selection, rep, weights)


def build_topic_context(topic: TopicRecord, config: ScoreConfig) -> TopicContext:
    """Build every document's pseudo-reference artifacts for a topic."""
    refs = tuple(_reference_for_document(doc, config) for doc in topic.documents)
    return TopicContext(topic.topic_id, refs)


def summary_representation(text: TextRecord, config: ScoreConfig) -> HybridRep:
    kept = [filter_tokens(s.tokens, config.stopwords) for s in text.sentences]
    return assemble_hybrid(
        text, kept, document_sentence_vectors(text), hybrid=config.relevance.hybrid
    )


def evaluate_summary(
    topic: TopicRecord,
    summary_id: str,
    config: ScoreConfig,
    context: TopicContext | None = None,
) -> ScoreReport:
    """Score one summary of a topic; failures become invalid report entries."""
    matches = [s for s in topic.summaries if s.summary_id == summary_id]
    if not matches:
        raise KeyError(f"topic {topic.topic_id!r} has no summary {summary_id!r}")
    summ = matches[0]
    fingerprint = config.fingerprint()
    warnings: list[str] = []
    try:
        if context is None:
            context = build_topic_context(topic, config)
        rep = summary_representation(summ.text, config)
        pairs = [(ref.rep, ref.weights) for ref in context.references]
        rel = relevance_score(rep, pairs, config.relevance)
        if config.redundancy_enabled:
            if rep.size < 2:
                warnings.append(
                    "summary has a single element; redundancy fixed at 0"
                )
            red = redundancy_score(rep)
            final = final_score(rel, red, config.redundancy_lambda)
        else:
            red = 0.0
            final = rel
    except (ReflessError, ValueError) as exc:
        return ScoreReport(
            topic_id=topic.topic_id,
            summary_id=summ.summary_id,
            system_id=summ.system_id,
            relevance=float("nan"),
            redundancy=float("nan"),
            final=float("nan"),
            config_fingerprint=fingerprint,
            warnings=tuple(warnings),
            error=str(exc),
        )
    return ScoreReport(
        topic_id=topic.topic_id,
        summary_id=summ.summary_id,
        system_id=summ.system_id,
        relevance=rel,
        redundancy=red,
        final=final,
        config_fingerprint=fingerprint,
        warnings=tuple(warnings),
    )


def _evaluate_topic(topic: TopicRecord, config: ScoreConfig) -> list[ScoreReport]:
    order = sorted(topic.summaries, key=lambda s: (s.system_id, s.summary_id))
    try:
        context = build_topic_context(topic, config)
    except (ReflessError, ValueError) as exc:
        fingerprint = config.fingerprint()
        return [
            ScoreReport(
                topic_id=topic.topic_id,
                summary_id=s.summary_id,
                system_id=s.system_id,
                relevance=float("nan"),
                redundancy=float("nan"),
                final=float("nan"),
                config_fingerprint=fingerprint,
                error=f"pseudo-reference construction failed: {exc}",
            )
            for s in order
        ]
    return [
        evaluate_summary(topic, s.summary_id, config, context=context) for s in order
    ]


def evaluate_bundle(
    bundle: EmbeddingBundle, config: ScoreConfig, jobs: int = 1
) -> list[ScoreReport]:
    """Score every (topic, summary) pair of a bundle.

    Reports come back ordered by (topic_id, system_id, summary_id)
    regardless of the parallelism degree; per-summary failures are
    recorded as invalid entries without aborting the batch.
    """
    topics = sorted(bundle.topics, key=lambda t: t.topic_id)
    if jobs <= 1 or len(topics) <= 1:
        per_topic = [_evaluate_topic(t, config) for t in topics]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_topic = list(pool.map(lambda t: _evaluate_topic(t, config), topics))
    return [report for group in per_topic for report in group]
