"""Reference-free summary scoring with centrality-weighted relevance,
self-referenced redundancy, and rank-correlation meta-evaluation."""

from .bundle import (
    EmbeddingBundle,
    SentenceRecord,
    SummaryRecord,
    TextRecord,
    TopicRecord,
    bundles_equal,
    filter_tokens,
    load_bundle,
    make_sentence,
    pool_sentence,
    save_bundle,
)
from .centrality import PacSumParams, pacsum_centrality, select_top_m, similarity_matrix
from .config import RunConfig, build_run_config
from .correlation import (
    CorrelationReport,
    RatingsTable,
    correlate,
    kendall_tau_b,
    load_ratings,
    pearson,
    spearman,
)
from .redundancy import redundancy_score
from .relevance import (
    HybridRep,
    RelevanceConfig,
    assemble_hybrid,
    beta_square,
    combine_weights,
    f_measure,
    relevance_score,
    weighted_match,
)
from .scoring import (
    ScoreConfig,
    ScoreReport,
    build_topic_context,
    evaluate_bundle,
    evaluate_summary,
    final_score,
)

__version__ = "0.1.0"
