import gzip
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commhate import corpus
from commhate.corpus import (
    NEGATIVE,
    POSITIVE,
    Comment,
    CorpusSlice,
    LabeledDataset,
    Platform,
    SourceLabel,
)


def _comment(i, body="some words here", community="c", **kw):
    return Comment(id=str(i), body=body, community=community, **kw)


def _slice(n, body="some words here", community="c", label=SourceLabel.HATE):
    return CorpusSlice(tuple(_comment(i, body, community) for i in range(n)), label)


class TestComment:
    def test_requires_id_and_community(self):
        with pytest.raises(ValueError, match="id"):
            Comment(id="", body="x", community="c")
        with pytest.raises(ValueError, match="community"):
            Comment(id="1", body="x", community="")

    def test_deleted_sentinels_flagged(self):
        for body in ("[deleted]", "[removed]"):
            assert Comment(id="1", body=body, community="c").deleted

    def test_empty_body_requires_deleted_flag(self):
        with pytest.raises(ValueError, match="empty body"):
            Comment(id="1", body="", community="c")
        assert Comment(id="1", body="", community="c", deleted=True).deleted


class TestRecordMapping:
    def test_reddit_fields(self):
        c = corpus.comment_from_record(
            {"id": "abc", "body": "hi", "subreddit": "CoonTown",
             "created_utc": 1438387200, "author": "u1", "score": 5},
            Platform.REDDIT,
        )
        assert (c.id, c.community, c.created_at, c.author) == (
            "abc", "CoonTown", 1438387200, "u1"
        )
        assert c.platform is Platform.REDDIT

    def test_generic_community_fallbacks(self):
        for key in ("community", "subreddit", "subverse", "board"):
            c = corpus.comment_from_record(
                {"id": "1", "body": "hi", key: "x"}, Platform.OTHER
            )
            assert c.community == "x"

    def test_missing_body_rejected(self):
        with pytest.raises(ValueError, match="body"):
            corpus.comment_from_record({"id": "1", "subreddit": "x"}, Platform.REDDIT)


class TestJsonlIO:
    def _write(self, path, lines):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    def test_two_wellformed_lines(self, tmp_path):
        p = tmp_path / "c.jsonl"
        self._write(p, [
            json.dumps({"id": "1", "body": "a", "subreddit": "s"}),
            json.dumps({"id": "2", "body": "b", "subreddit": "s"}),
        ])
        sl, skipped = corpus.load_jsonl(str(p))
        assert [c.id for c in sl.comments] == ["1", "2"]
        assert skipped == 0

    def test_empty_file(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text("", encoding="utf-8")
        sl, skipped = corpus.load_jsonl(str(p))
        assert len(sl) == 0 and skipped == 0

    def test_malformed_line_lenient_and_strict(self, tmp_path):
        p = tmp_path / "c.jsonl"
        self._write(p, [
            json.dumps({"id": "1", "body": "a", "subreddit": "s"}),
            "{not json",
            json.dumps({"id": "3", "body": "c", "subreddit": "s"}),
        ])
        sl, skipped = corpus.load_jsonl(str(p))
        assert [c.id for c in sl.comments] == ["1", "3"]
        assert skipped == 1
        with pytest.raises(ValueError, match=r":2:"):
            corpus.load_jsonl(str(p), strict=True)

    def test_community_filter(self, tmp_path):
        p = tmp_path / "c.jsonl"
        self._write(p, [
            json.dumps({"id": "1", "body": "a", "subreddit": "keep"}),
            json.dumps({"id": "2", "body": "b", "subreddit": "drop"}),
        ])
        sl, _ = corpus.load_jsonl(str(p), community_filter={"keep"})
        assert [c.community for c in sl.comments] == ["keep"]

    def test_gzip_round_trip(self, tmp_path):
        original = CorpusSlice(
            tuple(
                Comment(id=str(i), body=f"body {i} é", community="s",
                        platform=Platform.REDDIT, created_at=i, author=f"u{i}")
                for i in range(5)
            ),
            SourceLabel.HATE,
        )
        p = tmp_path / "c.jsonl.gz"
        corpus.write_jsonl(original, str(p))
        with gzip.open(p, "rt", encoding="utf-8") as fh:
            assert len(fh.readlines()) == 5
        loaded, skipped = corpus.load_jsonl(
            str(p), platform=Platform.REDDIT, source_label=SourceLabel.HATE
        )
        assert skipped == 0
        for a, b in zip(original.comments, loaded.comments):
            assert (a.id, a.body, a.community, a.created_at, a.author) == (
                b.id, b.body, b.community, b.created_at, b.author
            )

    def test_plain_round_trip_identity(self, tmp_path):
        original = _slice(4)
        p1 = tmp_path / "a.jsonl"
        p2 = tmp_path / "b.jsonl"
        corpus.write_jsonl(original, str(p1))
        loaded, _ = corpus.load_jsonl(str(p1), platform=Platform.OTHER,
                                      source_label=SourceLabel.HATE)
        corpus.write_jsonl(loaded, str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_streaming_is_lazy(self, tmp_path):
        p = tmp_path / "c.jsonl"
        self._write(p, [
            json.dumps({"id": str(i), "body": "b", "subreddit": "s"})
            for i in range(100)
        ])
        it = corpus.iter_jsonl(str(p))
        assert next(it).id == "0"  # consumes one line, not the file


class TestSampling:
    def test_exhaustive_sample_returns_all(self):
        sl = _slice(1000)
        out = corpus.sample_background(sl, 1000, seed=1)
        assert sorted(c.id for c in out.comments) == sorted(
            c.id for c in sl.comments
        )

    def test_exclusion_shortfall_error(self):
        comments = tuple(
            _comment(i, community="X" if i < 100 else "ok") for i in range(1000)
        )
        sl = CorpusSlice(comments, SourceLabel.BACKGROUND)
        with pytest.raises(ValueError, match="900"):
            corpus.sample_background(sl, 950, exclude_communities={"X"})

    def test_excluded_communities_never_sampled(self):
        comments = tuple(
            _comment(i, community="X" if i % 3 == 0 else "ok") for i in range(300)
        )
        sl = CorpusSlice(comments, SourceLabel.BACKGROUND)
        out = corpus.sample_background(sl, 150, exclude_communities={"X"}, seed=5)
        assert all(c.community != "X" for c in out.comments)

    def test_deterministic_under_seed(self):
        sl = _slice(200)
        a = corpus.sample_background(sl, 50, seed=9)
        b = corpus.sample_background(sl, 50, seed=9)
        c = corpus.sample_background(sl, 50, seed=10)
        assert [x.id for x in a.comments] == [x.id for x in b.comments]
        assert [x.id for x in a.comments] != [x.id for x in c.comments]

    @given(st.integers(0, 2**32), st.integers(1, 50))
    @settings(max_examples=30)
    def test_sample_without_replacement_is_uniform_subset(self, seed, n):
        items = list(range(60))
        rng = random.Random(seed)
        out = corpus.sample_without_replacement(items, n, rng)
        assert len(out) == n
        assert len(set(out)) == n
        assert set(out) <= set(items)


class TestBuildBalanced:
    def test_downsamples_majority(self):
        ds, dropped = corpus.build_balanced(_slice(100), _slice(500), seed=0)
        assert ds.counts() == (100, 100)
        assert dropped == 0

    def test_drop_tally_counts_empty_after_preprocess(self):
        pos = CorpusSlice(
            tuple(_comment(i) for i in range(8))
            + (_comment("e1", body="the 123"), _comment("e2", body="!!!")),
            SourceLabel.HATE,
        )
        ds, dropped = corpus.build_balanced(pos, _slice(10), seed=0)
        assert ds.counts() == (8, 8)
        assert dropped == 2

    def test_deleted_comments_never_enter_dataset(self):
        pos = CorpusSlice(
            tuple(_comment(i) for i in range(5))
            + (_comment("d", body="[deleted]"),),
            SourceLabel.HATE,
        )
        ds, dropped = corpus.build_balanced(pos, _slice(5), seed=0)
        assert dropped == 1
        assert all(cid != "d" for cid, _ in ds.provenance)

    def test_empty_side_error(self):
        empty = CorpusSlice((_comment("x", body="the the"),), SourceLabel.HATE)
        with pytest.raises(ValueError, match="non-empty"):
            corpus.build_balanced(empty, _slice(5), seed=0)

    def test_deterministic(self):
        a, _ = corpus.build_balanced(_slice(30), _slice(80), seed=4)
        b, _ = corpus.build_balanced(_slice(30), _slice(80), seed=4)
        assert a == b


class TestImbalanced:
    def test_exact_ratio(self):
        ds, _ = corpus.build_imbalanced_testset(_slice(50), _slice(600), ratio=10)
        assert ds.counts() == (50, 500)

    def test_insufficient_negatives_error_names_counts(self):
        with pytest.raises(ValueError) as exc:
            corpus.build_imbalanced_testset(_slice(50), _slice(10000), ratio=1000)
        assert "50000" in str(exc.value) and "10000" in str(exc.value)

    def test_ratio_one_matches_balanced_counts(self):
        ds, _ = corpus.build_imbalanced_testset(_slice(40), _slice(90), ratio=1)
        assert ds.counts() == (40, 40)

    def test_dataset_level_subset(self):
        ds, _ = corpus.build_balanced(_slice(20), _slice(300), seed=0)
        # rebuild with spare negatives: 20 pos + 200 neg source
        big, _ = corpus.build_imbalanced_testset(_slice(20), _slice(300), ratio=10)
        small = corpus.imbalanced_subset(big, 5, seed=1)
        assert small.counts() == (20, 100)
        with pytest.raises(ValueError, match="needs"):
            corpus.imbalanced_subset(ds, 3)


class TestKfold:
    def _dataset(self, n_pos, n_neg):
        docs = tuple(("tok",) for _ in range(n_pos + n_neg))
        labels = (POSITIVE,) * n_pos + (NEGATIVE,) * n_neg
        prov = tuple((str(i), "c") for i in range(n_pos + n_neg))
        return LabeledDataset(docs, labels, prov)

    def test_partition_100_k10(self):
        ds = self._dataset(50, 50)
        splits = corpus.kfold_split(ds, 10, seed=0)
        all_test = [i for _, test in splits for i in test]
        assert sorted(all_test) == list(range(100))
        assert all(len(test) == 10 for _, test in splits)
        for train, test in splits:
            assert set(train) & set(test) == set()
            assert sorted(set(train) | set(test)) == list(range(100))

    def test_sizes_105_k10(self):
        ds = self._dataset(53, 52)
        sizes = sorted(len(test) for _, test in corpus.kfold_split(ds, 10, seed=3))
        assert sizes == [10] * 5 + [11] * 5

    def test_stratification_balanced(self):
        ds = self._dataset(50, 50)
        for _, test in corpus.kfold_split(ds, 10, seed=7):
            labels = [ds.labels[i] for i in test]
            assert labels.count(POSITIVE) == 5
            assert labels.count(NEGATIVE) == 5

    @given(st.integers(2, 10), st.integers(0, 1000))
    @settings(max_examples=30)
    def test_partition_property(self, k, seed):
        ds = self._dataset(17, 23)
        splits = corpus.kfold_split(ds, k, seed=seed)
        all_test = sorted(i for _, test in splits for i in test)
        assert all_test == list(range(40))
        sizes = [len(test) for _, test in splits]
        assert max(sizes) - min(sizes) <= 1
        # class ratio within one item per class of the dataset's
        for _, test in splits:
            labels = [ds.labels[i] for i in test]
            n_pos = labels.count(POSITIVE)
            expected = 17 * len(test) / 40
            assert abs(n_pos - expected) <= 1

    def test_k_exceeds_size_error(self):
        with pytest.raises(ValueError, match="exceeds"):
            corpus.kfold_split(self._dataset(2, 2), 5)

    def test_deterministic(self):
        ds = self._dataset(30, 30)
        assert corpus.kfold_split(ds, 5, seed=2) == corpus.kfold_split(ds, 5, seed=2)
        assert corpus.kfold_split(ds, 5, seed=2) != corpus.kfold_split(ds, 5, seed=3)


class TestDatasetPersistence:
    def _dataset(self):
        return LabeledDataset(
            (("a", "b"), ("c",), ("d", "e")),
            (POSITIVE, NEGATIVE, POSITIVE),
            (("1", "x"), ("2", "y"), ("3", "x")),
            seed=5,
        )

    def test_round_trip(self, tmp_path):
        ds = self._dataset()
        p = tmp_path / "ds.jsonl"
        corpus.write_dataset(ds, str(p))
        loaded = corpus.load_dataset(str(p))
        assert loaded.documents == ds.documents
        assert loaded.labels == ds.labels
        assert loaded.provenance == ds.provenance

    def test_malformed_row_names_line(self, tmp_path):
        p = tmp_path / "ds.jsonl"
        p.write_text('{"tokens": ["a"], "label": "positive", "id": "1", '
                     '"community": "c"}\n{"oops": 1}\n', encoding="utf-8")
        with pytest.raises(ValueError, match=r":2:"):
            corpus.load_dataset(str(p))

    def test_fingerprint_stable_and_sensitive(self):
        ds = self._dataset()
        assert corpus.dataset_fingerprint(ds) == corpus.dataset_fingerprint(ds)
        other = LabeledDataset(
            ds.documents, (NEGATIVE, POSITIVE, POSITIVE), ds.provenance, 5
        )
        assert corpus.dataset_fingerprint(ds) != corpus.dataset_fingerprint(other)


class TestLabeledDataset:
    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="equal length"):
            LabeledDataset((("a",),), (POSITIVE, NEGATIVE), (("1", "c"),))

    def test_unknown_label_rejected(self):
        with pytest.raises(ValueError, match="unknown label"):
            LabeledDataset((("a",),), ("maybe",), (("1", "c"),))

    def test_subset_preserves_alignment(self):
        ds = LabeledDataset(
            (("a",), ("b",), ("c",)),
            (POSITIVE, NEGATIVE, POSITIVE),
            (("1", "x"), ("2", "y"), ("3", "z")),
        )
        sub = ds.subset([2, 0])
        assert sub.documents == (("c",), ("a",))
        assert sub.labels == (POSITIVE, POSITIVE)
        assert sub.provenance == (("3", "z"), ("1", "x"))

    def test_shuffle_labels_preserves_marginals(self):
        ds = LabeledDataset(
            tuple((f"t{i}",) for i in range(20)),
            (POSITIVE,) * 8 + (NEGATIVE,) * 12,
            tuple((str(i), "c") for i in range(20)),
        )
        shuffled = corpus.shuffle_labels(ds, seed=3)
        assert shuffled.counts() == ds.counts()
        assert shuffled.documents == ds.documents
        assert shuffled.labels != ds.labels
