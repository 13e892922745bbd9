"""Bundle format, pooling, and token filtering."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from refless.bundle import (
    EmbeddingBundle,
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
from refless.errors import BundleFormatError, DimensionMismatchError, StructuralError
from refless.stopwords import DEFAULT_STOPWORDS, load_stoplist, prepare_stoplist

from conftest import demo_bundle, one_token_text, protocol_bundle


def minimal_bundle() -> EmbeddingBundle:
    doc = TextRecord(
        (
            make_sentence(["storm", "hits"], [[1.0, 0.0], [0.0, 1.0]]),
            make_sentence(["coast"], [[0.5, 0.5]]),
        )
    )
    summ = SummaryRecord("s1", "sysA", one_token_text("storm", (1.0, 0.0)))
    topic = TopicRecord("t1", (doc,), (summ,))
    return EmbeddingBundle("test-encoder", 2, (topic,))


class TestLoadSave:
    def test_minimal_binary_roundtrip(self, tmp_path):
        bundle = minimal_bundle()
        path = tmp_path / "b.bin"
        save_bundle(bundle, path)
        loaded = load_bundle(path)
        assert len(loaded.topics) == 1
        assert len(loaded.topics[0].documents) == 1
        assert bundles_equal(bundle, loaded)

    def test_binary_load_serialize_load_identical(self, tmp_path):
        bundle = demo_bundle(seed=5)
        p1, p2 = tmp_path / "a.bin", tmp_path / "b.bin"
        save_bundle(bundle, p1)
        first = load_bundle(p1)
        save_bundle(first, p2)
        second = load_bundle(p2)
        assert bundles_equal(first, second)
        assert p1.read_bytes() == p2.read_bytes()

    def test_json_roundtrip_preserves_float64(self, tmp_path):
        bundle = demo_bundle(seed=6)
        path = tmp_path / "b.json"
        save_bundle(bundle, path)
        loaded = load_bundle(path)
        assert bundles_equal(bundle, loaded)

    def test_binary_quantizes_to_float32(self, tmp_path):
        bundle = protocol_bundle()
        path = tmp_path / "b.bin"
        save_bundle(bundle, path)
        loaded = load_bundle(path)
        vec = loaded.topics[0].documents[0].sentences[0].vectors
        assert vec.dtype == np.float64
        assert np.array_equal(vec, vec.astype(np.float32).astype(np.float64))

    def test_meta_preserved(self, tmp_path):
        bundle = EmbeddingBundle(
            "enc", 2, protocol_bundle().topics, meta={"splitter": "rulesplit-1"}
        )
        for name in ("m.bin", "m.json"):
            path = tmp_path / name
            save_bundle(bundle, path)
            assert load_bundle(path).meta == {"splitter": "rulesplit-1"}

    def test_dimension_mismatch_names_coordinates(self, tmp_path):
        doc = TextRecord((make_sentence(["a"], [[1.0, 0.0, 0.0]]),))
        topic = TopicRecord("t9", (doc,), protocol_bundle().topics[0].summaries)
        bad = EmbeddingBundle("enc", 2, (topic,))
        with pytest.raises(DimensionMismatchError, match=r"t9.*document 0.*sentence 0"):
            save_bundle(bad, tmp_path / "x.bin")

    def test_empty_document_rejected_on_save(self, tmp_path):
        topic = TopicRecord(
            "t1", (TextRecord(()),), protocol_bundle().topics[0].summaries
        )
        with pytest.raises(StructuralError, match="empty sentence list"):
            save_bundle(EmbeddingBundle("enc", 2, (topic,)), tmp_path / "x.bin")

    def test_zero_sentence_document_rejected_on_load(self, tmp_path):
        import struct

        def s32(text: str) -> bytes:
            raw = text.encode()
            return struct.pack("<I", len(raw)) + raw

        body = s32("t1") + struct.pack("<II", 1, 1)
        body += struct.pack("<I", 0)  # document with zero sentences
        body += s32("s1") + s32("sysA")
        body += struct.pack("<II", 1, 1) + s32("tok")
        body += struct.pack("<2f", 1.0, 0.0)
        path = tmp_path / "zero.bin"
        path.write_bytes(b"EMBND/1 binary\nencoder_id=x\ndim=2\ntopics=1\n\n" + body)
        with pytest.raises(StructuralError, match="empty sentence list"):
            load_bundle(path)

    def test_not_a_bundle(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"hello world")
        with pytest.raises(BundleFormatError, match="not a bundle"):
            load_bundle(path)

    def test_truncated_body(self, tmp_path):
        path = tmp_path / "t.bin"
        save_bundle(minimal_bundle(), path)
        data = path.read_bytes()
        path.write_bytes(data[:-10])
        with pytest.raises(BundleFormatError, match="truncated"):
            load_bundle(path)

    def test_malformed_manifest(self, tmp_path):
        path = tmp_path / "m.bin"
        path.write_bytes(b"EMBND/1 binary\nencoder_id=x\ndim=oops\ntopics=1\n\n")
        with pytest.raises(BundleFormatError, match="non-integer"):
            load_bundle(path)

    def test_missing_manifest_key(self, tmp_path):
        path = tmp_path / "m.bin"
        path.write_bytes(b"EMBND/1 binary\nencoder_id=x\ntopics=1\n\n")
        with pytest.raises(BundleFormatError, match="missing 'dim'"):
            load_bundle(path)

    def test_trailing_garbage(self, tmp_path):
        path = tmp_path / "t.bin"
        save_bundle(minimal_bundle(), path)
        path.write_bytes(path.read_bytes() + b"\x00\x00")
        with pytest.raises(BundleFormatError, match="trailing"):
            load_bundle(path)


class TestPoolSentence:
    def test_componentwise_max(self):
        assert pool_sentence([[1, 3], [2, 0]]).tolist() == [2, 3]

    def test_singleton_identity(self):
        assert pool_sentence([[-1, -2]]).tolist() == [-1, -2]

    def test_three_tokens(self):
        got = pool_sentence([[0.5, 0.1, 0.0], [0.2, 0.9, -0.3], [0.4, 0.4, 0.4]])
        assert got.tolist() == [0.5, 0.9, 0.4]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            pool_sentence([])

    def test_brute_force_equivalence(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n, d = int(rng.integers(1, 9)), int(rng.integers(1, 6))
            vecs = rng.standard_normal((n, d))
            got = pool_sentence(vecs)
            for c in range(d):
                assert got[c] == max(vecs[i][c] for i in range(n))


class TestFilterTokens:
    def test_stopword_and_punctuation(self):
        assert filter_tokens(["the", "cat", "."], {"the"}) == [1]

    def test_case_insensitive(self):
        assert filter_tokens(["The", "THE"], {"the"}) == []

    def test_identity_when_empty_stoplist(self):
        assert filter_tokens(["quick", "brown", "fox"], set()) == [0, 1, 2]

    def test_subword_pieces_kept_opaque(self):
        # pieces are matched as-is: "##the" is not the stop-word "the"
        assert filter_tokens(["##the", "##ing"], {"the"}) == [0, 1]

    def test_punctuation_only_dropped_without_stoplist(self):
        assert filter_tokens(["...", "--", "word", "'"], set()) == [2]

    @given(st.lists(st.text(max_size=6), max_size=30))
    def test_indices_strictly_increasing_subset(self, tokens):
        kept = filter_tokens(tokens, DEFAULT_STOPWORDS)
        assert all(0 <= i < len(tokens) for i in kept)
        assert all(a < b for a, b in zip(kept, kept[1:]))


class TestStoplist:
    def test_default_list_contains_classics(self):
        for word in ("the", "of", "and", "is", "don't"):
            assert word in DEFAULT_STOPWORDS

    def test_prepare_casefolds(self):
        assert prepare_stoplist(["The", "OF"]) == frozenset({"the", "of"})

    def test_load_stoplist_file(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("# comment\nFoo\n\nbar\n")
        assert load_stoplist(path) == frozenset({"foo", "bar"})
