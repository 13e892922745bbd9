"""Acceptance suite: one test per release criterion, at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion. Every expected value here was either computed by the inline
direct-definition oracles or derived by hand in exact arithmetic (the
protocol fixture constants live next to the fixture in conftest).
"""

import itertools
import math
import time

import numpy as np
import pytest

from refless.bundle import save_bundle
from refless.centrality import PseudoReferenceSelection
from refless.cli import main
from refless.correlation import (
    PER_TOPIC_AVERAGE,
    POOLED,
    correlate,
    kendall_tau_b,
    load_ratings,
    pearson,
    spearman,
)
from refless.redundancy import redundancy_score
from refless.relevance import (
    CentralityWeights,
    HybridRep,
    beta_square,
    combine_weights,
    f_measure,
    weighted_match,
)
from refless.scoring import ScoreConfig, evaluate_bundle, final_score

from conftest import (
    PROTOCOL_POOLED,
    PROTOCOL_RATINGS_CSV,
    PROTOCOL_TOPIC_AVG,
    demo_bundle,
    protocol_bundle,
)
from test_correlation import oracle_pearson, oracle_spearman, oracle_tau_b
from test_relevance import naive_match
from test_scoring import TestEndToEndScaleInvariance


def _ok(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


def rep(vectors) -> HybridRep:
    arr = np.asarray(vectors, dtype=np.float64)
    return HybridRep(arr, arr.shape[0], 0, tuple([0] * arr.shape[0]))


def test_oracle_equivalence_weighted_match():
    """200 random mixed-sign instances agree with the naive double loop."""
    rng = np.random.default_rng(100)
    t0 = time.perf_counter()
    for _ in range(200):
        d = int(rng.integers(1, 9))
        m = int(rng.integers(1, 21))
        n = int(rng.integers(1, 21))
        refv = rng.standard_normal((m, d))
        summv = rng.standard_normal((n, d))
        a = rng.random(m) + 1e-3
        want_r, want_p = naive_match(refv.tolist(), a.tolist(), summv.tolist())
        got_r, got_p = weighted_match(
            rep(refv), CentralityWeights(a, np.empty(0), a), rep(summv)
        )
        assert abs(got_r - want_r) <= 1e-9
        assert abs(got_p - want_p) <= 1e-9
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0, f"oracle suite took {elapsed:.2f}s"
    _ok("weighted-match oracle equivalence (200 instances, <5s)")


def test_beta_square_clamp_suite():
    """Three-case rule over the full grid with exact boundary behavior."""
    t0 = time.perf_counter()
    for gamma in (1, 2, 3):
        for r_size in range(1, 101):
            for x_size in range(1, 101):
                got = beta_square(r_size, x_size, gamma)
                if r_size <= x_size:
                    assert got == 1.0
                elif r_size >= x_size * 2**gamma:
                    assert got == 2.0
                else:
                    # independent route: exp(log(ratio)/gamma)
                    want = math.exp(math.log(r_size / x_size) / gamma)
                    assert abs(got - want) <= 1e-12
                    assert 1.0 < got < 2.0 or abs(got - want) <= 1e-12
    # boundary hits: ratio^(1/gamma) exactly 1 and exactly 2
    for gamma in (1, 2, 3):
        assert beta_square(17, 17, gamma) == 1.0
        assert beta_square(3 * 2**gamma, 3, gamma) == 2.0
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"clamp suite took {elapsed:.2f}s"
    _ok("beta-square clamp suite (grid 100x100, gamma 1..3, <1s)")


def test_f_measure_identities():
    """f(p,p)=p; fbeta==f1 when the reference is not longer; monotone final."""
    rng = np.random.default_rng(101)
    for _ in range(200):
        p = float(rng.uniform(-1, 1))
        bsq = float(rng.uniform(1, 2))
        assert abs(f_measure(p, p, bsq) - p) <= 1e-12

    for _ in range(200):
        r_size = int(rng.integers(1, 40))
        x_size = int(rng.integers(r_size, 60))  # |R| <= |X|
        assert beta_square(r_size, x_size, int(rng.integers(1, 4))) == 1.0
        recall, precision = rng.uniform(0, 1, size=2)
        f1 = f_measure(recall, precision, 1.0)
        fb = f_measure(recall, precision, beta_square(r_size, x_size, 2))
        assert abs(f1 - fb) <= 1e-12

    for _ in range(200):
        rel, red = rng.uniform(-1, 1, size=2)
        lam = float(rng.uniform(0.01, 1.0))
        delta = float(rng.uniform(1e-9, 0.1))
        assert final_score(rel + delta, red, lam) > final_score(rel, red, lam)
        assert final_score(rel, red + delta, lam) < final_score(rel, red, lam)
    _ok("F-measure identities and final-score monotonicity")


def test_redundancy_suite():
    """Self-mask exclusion, three coinciding forms, duplication monotonicity."""
    # orthogonal pair: masked score 0; unmasked would be 1
    assert redundancy_score(rep([(1.0, 0.0), (0.0, 1.0)])) == 0.0
    unmasked = np.mean(np.max(np.eye(2), axis=1))
    assert unmasked == 1.0

    rng = np.random.default_rng(102)
    for _ in range(100):
        n = int(rng.integers(2, 15))
        d = int(rng.integers(1, 8))
        vectors = rng.standard_normal((n, d))
        unit = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
        sims = np.clip(unit @ unit.T, -1.0, 1.0)
        np.fill_diagonal(sims, -np.inf)
        maxima = sims.max(axis=1)
        precision_form = maxima.sum() / n
        weights = np.full(n, 1.0 / n)
        recall_form = float(weights @ maxima) / weights.sum()
        f1_form = (
            0.0
            if recall_form + precision_form == 0.0
            else 2 * recall_form * precision_form / (recall_form + precision_form)
        )
        assert abs(recall_form - precision_form) <= 1e-12
        assert abs(f1_form - precision_form) <= 1e-12
        assert abs(redundancy_score(rep(vectors)) - precision_form) <= 1e-9

    for _ in range(100):
        n = int(rng.integers(2, 12))
        vectors = rng.standard_normal((n, int(rng.integers(1, 8))))
        base = redundancy_score(rep(vectors))
        dup = np.vstack([vectors, vectors[int(rng.integers(n))]])
        assert redundancy_score(rep(dup)) >= base - 1e-12
    _ok("redundancy suite (self-mask, three forms, duplication)")


def test_weight_normalization():
    """Combined weights sum to 1 and reproduce the hand-derived fixture."""
    fixture_rep = HybridRep(np.zeros((5, 2)), 3, 2, (0, 0, 1))
    selection = PseudoReferenceSelection((0, 1), np.array([1.0, 0.5]))
    got = combine_weights(selection, fixture_rep)
    assert np.allclose(got.combined, [0.25, 0.25, 0.125, 0.25, 0.125], atol=1e-15)

    rng = np.random.default_rng(103)
    for _ in range(200):
        n_sent = int(rng.integers(1, 10))
        norm = rng.random(n_sent)
        norm[int(rng.integers(n_sent))] = 1.0
        counts = rng.integers(0, 5, size=n_sent)
        token_sent = tuple(int(s) for s in np.repeat(np.arange(n_sent), counts))
        hybrid_rep = HybridRep(
            np.zeros((len(token_sent) + n_sent, 2)), len(token_sent), n_sent, token_sent
        )
        sel = PseudoReferenceSelection(tuple(range(n_sent)), norm)
        combined = combine_weights(sel, hybrid_rep).combined
        assert abs(combined.sum() - 1.0) <= 1e-9
        assert np.all(combined >= 0.0)
    _ok("weight normalization (sum to 1, Eqs-style fixture)")


def test_end_to_end_scale_invariance():
    """Global positive scaling leaves every final score unchanged."""
    bundle = demo_bundle(seed=104, n_topics=3)
    config = ScoreConfig()
    base = evaluate_bundle(bundle, config)
    helper = TestEndToEndScaleInvariance()
    for scale in (3.7, 0.04, 4.0):
        scaled_reports = evaluate_bundle(helper.scaled_bundle(bundle, scale), config)
        for r0, r1 in zip(base, scaled_reports):
            assert abs(r0.final - r1.final) <= 1e-12
            assert abs(r0.relevance - r1.relevance) <= 1e-12
            assert abs(r0.redundancy - r1.redundancy) <= 1e-12
    _ok("end-to-end scale invariance (<=1e-12)")


def test_correlation_oracle():
    """Brute-force match on all short permutations plus random tied lists."""
    for n in range(2, 7):
        x = list(range(1, n + 1))
        for perm in itertools.permutations(x):
            y = list(perm)
            assert abs(pearson(x, y) - oracle_pearson(x, y)) <= 1e-12
            assert abs(spearman(x, y) - oracle_spearman(x, y)) <= 1e-12
            assert abs(kendall_tau_b(x, y) - oracle_tau_b(x, y)) <= 1e-12

    rng = np.random.default_rng(105)
    checked = 0
    while checked < 100:
        n = int(rng.integers(3, 12))
        x = rng.integers(0, 4, size=n).tolist()
        y = rng.integers(0, 4, size=n).tolist()
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        assert abs(pearson(x, y) - oracle_pearson(x, y)) <= 1e-12
        assert abs(spearman(x, y) - oracle_spearman(x, y)) <= 1e-12
        assert abs(kendall_tau_b(x, y) - oracle_tau_b(x, y)) <= 1e-12
        checked += 1

    assert kendall_tau_b([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(
        5 / math.sqrt(30), abs=1e-15
    )
    _ok("correlation oracle (perms n<=6, 100 tied lists, tau-b fixture)")


def test_protocol_fixture(tmp_path):
    """Synthetic 3-topic bundle reproduces hand-computed protocol values."""
    bundle = protocol_bundle()
    ratings_path = tmp_path / "ratings.csv"
    ratings_path.write_text(PROTOCOL_RATINGS_CSV)
    ratings = load_ratings(ratings_path)
    reports = evaluate_bundle(bundle, ScoreConfig())

    # the construction pins relevance to exactly (1, 0, -1) per topic
    by_topic = {}
    for r in reports:
        by_topic.setdefault(r.topic_id, []).append(r.relevance)
    for rels in by_topic.values():
        assert rels == [1.0, 0.0, -1.0]

    topic_avg = correlate(reports, ratings, PER_TOPIC_AVERAGE, "overall")
    assert topic_avg.pearson_r == pytest.approx(PROTOCOL_TOPIC_AVG["r"], abs=1e-12)
    assert topic_avg.spearman_rho == pytest.approx(PROTOCOL_TOPIC_AVG["rho"], abs=1e-12)
    assert topic_avg.kendall_tau == pytest.approx(PROTOCOL_TOPIC_AVG["tau"], abs=1e-12)
    assert topic_avg.n_topics_used == 3

    pooled = correlate(reports, ratings, POOLED, "overall")
    assert pooled.pearson_r == pytest.approx(PROTOCOL_POOLED["r"], abs=1e-12)
    assert pooled.spearman_rho == pytest.approx(PROTOCOL_POOLED["rho"], abs=1e-12)
    assert pooled.kendall_tau == pytest.approx(PROTOCOL_POOLED["tau"], abs=1e-12)
    assert pooled.n_pairs_used == 9
    _ok("protocol fixture (per-topic average and pooled, hand-computed)")


def test_determinism_across_jobs(tmp_path):
    """cmd_score emits byte-identical files for --jobs 1 and --jobs 8."""
    bundle_path = tmp_path / "bundle.bin"
    save_bundle(demo_bundle(seed=106, n_topics=5), bundle_path)
    out1 = tmp_path / "scores-j1.csv"
    out8 = tmp_path / "scores-j8.csv"
    assert main(["score", "--bundle", str(bundle_path), "--out", str(out1),
                 "--jobs", "1"]) == 0
    assert main(["score", "--bundle", str(bundle_path), "--out", str(out8),
                 "--jobs", "8"]) == 0
    assert out1.read_bytes() == out8.read_bytes()
    # and a rerun reproduces the same bytes
    assert main(["score", "--bundle", str(bundle_path), "--out", str(out1),
                 "--jobs", "1"]) == 0
    assert out1.read_bytes() == out8.read_bytes()
    _ok("determinism across --jobs and reruns (byte-identical)")
