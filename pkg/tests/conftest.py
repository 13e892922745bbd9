"""Shared fixtures: synthetic bundles with controlled geometry."""

from __future__ import annotations

import numpy as np
import pytest

from refless.bundle import (
    EmbeddingBundle,
    SummaryRecord,
    TextRecord,
    TopicRecord,
    make_sentence,
)

E1 = (1.0, 0.0)
E2 = (0.0, 1.0)
NEG_E1 = (-1.0, 0.0)


def one_token_text(token: str, vec) -> TextRecord:
    return TextRecord((make_sentence([token], [vec]),))


def protocol_bundle() -> EmbeddingBundle:
    """Three topics whose summaries have exactly controlled relevance.

    Each topic has one single-sentence, single-token document along e1,
    so the pseudo reference is [e1 token, e1 sentence] with weights
    [1/2, 1/2]. Summaries along e1 / e2 / -e1 then score relevance
    exactly 1 / 0 / -1, and every summary has redundancy exactly 1
    (its two elements coincide).
    """
    topics = []
    for topic_id in ("t1", "t2", "t3"):
        doc = one_token_text("alpha", E1)
        summaries = (
            SummaryRecord("s1", "sys1", one_token_text("best", E1)),
            SummaryRecord("s2", "sys2", one_token_text("meh", E2)),
            SummaryRecord("s3", "sys3", one_token_text("worst", NEG_E1)),
        )
        topics.append(TopicRecord(topic_id, (doc,), summaries))
    return EmbeddingBundle(encoder_id="unit-fixture", dim=2, topics=tuple(topics))


PROTOCOL_RATINGS_CSV = (
    "topic_id,summary_id,system_id,dimension,score\n"
    # t1: agrees with the metric; t2: reversed; t3: mixed (r=0.5, tau=1/3)
    "t1,s1,sys1,overall,3\n"
    "t1,s2,sys2,overall,2\n"
    "t1,s3,sys3,overall,1\n"
    "t2,s1,sys1,overall,1\n"
    "t2,s2,sys2,overall,2\n"
    "t2,s3,sys3,overall,3\n"
    "t3,s1,sys1,overall,3\n"
    "t3,s2,sys2,overall,1\n"
    "t3,s3,sys3,overall,2\n"
)

# Hand-derived (exact rational arithmetic) expectations for the fixture:
# per-topic coefficients (1, 1, 1), (-1, -1, -1), (1/2, 1/2, 1/3).
PROTOCOL_TOPIC_AVG = {"r": 1 / 6, "rho": 1 / 6, "tau": 1 / 9}
# pooled over all 9 pairs: r = 1/6, rho = 9/54, tau-b = 4/sqrt(27*27).
PROTOCOL_POOLED = {"r": 1 / 6, "rho": 1 / 6, "tau": 4 / 27}


def random_text(rng: np.random.Generator, dim: int, n_sentences: int) -> TextRecord:
    """Random sentences mixing content words, stop-words, and punctuation."""
    vocab = ["storm", "harbor", "rescue", "crew", "vessel", "coast", "night",
             "signal", "report", "damage"]
    stopish = ["the", "of", "and", "was", "to"]
    sentences = []
    for _ in range(n_sentences):
        n_tokens = int(rng.integers(3, 8))
        tokens = []
        for t in range(n_tokens):
            roll = rng.random()
            if roll < 0.25:
                tokens.append(stopish[int(rng.integers(len(stopish)))])
            elif roll < 0.32:
                tokens.append(".")
            else:
                tokens.append(vocab[int(rng.integers(len(vocab)))])
        vectors = rng.standard_normal((n_tokens, dim))
        sentences.append(make_sentence(tokens, vectors))
    return TextRecord(tuple(sentences))


def demo_bundle(seed: int = 13, n_topics: int = 2, k_docs: int = 3, dim: int = 6) -> EmbeddingBundle:
    """A generic random bundle exercising filtering, centrality, and pooling."""
    rng = np.random.default_rng(seed)
    topics = []
    for t in range(n_topics):
        docs = tuple(
            random_text(rng, dim, n_sentences=int(rng.integers(4, 9)))
            for _ in range(k_docs)
        )
        summaries = tuple(
            SummaryRecord(
                f"s{j}", f"sys{j}", random_text(rng, dim, n_sentences=int(rng.integers(2, 4)))
            )
            for j in range(4)
        )
        topics.append(TopicRecord(f"topic{t}", docs, summaries))
    return EmbeddingBundle(encoder_id="rng-fixture", dim=dim, topics=tuple(topics))


@pytest.fixture
def small_bundle() -> EmbeddingBundle:
    return demo_bundle()


@pytest.fixture
def fixture_bundle() -> EmbeddingBundle:
    return protocol_bundle()
