import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commhate import vectorizer
from commhate.vectorizer import SparseVector, fit_tfidf

TOKENS = st.text(alphabet="abcdefg", min_size=1, max_size=4)
DOCS = st.lists(st.lists(TOKENS, min_size=0, max_size=8), min_size=1, max_size=12)


class TestSparseVector:
    def test_validation(self):
        SparseVector((0, 2), (1.0, 3.0), 5)
        with pytest.raises(ValueError, match="strictly increasing"):
            SparseVector((2, 2), (1.0, 1.0), 5)
        with pytest.raises(ValueError, match="strictly increasing"):
            SparseVector((3, 1), (1.0, 1.0), 5)
        with pytest.raises(ValueError, match="out of range"):
            SparseVector((0, 7), (1.0, 1.0), 5)
        with pytest.raises(ValueError, match="positive"):
            SparseVector((0,), (0.0,), 5)
        with pytest.raises(ValueError, match="positive"):
            SparseVector((0,), (float("nan"),), 5)
        with pytest.raises(ValueError, match="equal length"):
            SparseVector((0, 1), (1.0,), 5)

    def test_dot_matches_dense(self):
        a = SparseVector((0, 2, 4), (1.0, 2.0, 3.0), 6)
        b = SparseVector((1, 2, 4, 5), (5.0, 7.0, 11.0, 13.0), 6)
        assert a.dot(b) == pytest.approx(np.dot(a.to_dense(), b.to_dense()))
        assert a.dot(b) == b.dot(a)

    def test_dot_dim_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            SparseVector((0,), (1.0,), 3).dot(SparseVector((0,), (1.0,), 4))

    def test_norm(self):
        assert SparseVector((0, 1), (3.0, 4.0), 2).norm() == 5.0
        assert SparseVector((), (), 2).norm() == 0.0


class TestFit:
    def test_hand_example_min_df_1(self):
        model = fit_tfidf([["cat", "cat", "dog"], ["dog", "fish"]], min_df=1)
        assert model.vocabulary == ("cat", "dog", "fish")
        assert model.doc_freq == (1, 2, 1)
        idf = dict(zip(model.vocabulary, model.idf()))
        assert idf["dog"] == pytest.approx(math.log(3 / 3) + 1, rel=1e-12)
        assert idf["cat"] == pytest.approx(math.log(3 / 2) + 1, rel=1e-12)
        assert idf["fish"] == idf["cat"]

    def test_min_df_2_prunes_singletons(self):
        model = fit_tfidf([["cat", "cat", "dog"], ["dog", "fish"]], min_df=2)
        assert model.vocabulary == ("dog",)

    def test_single_document_idf(self):
        model = fit_tfidf([["a", "b", "a"]], min_df=1)
        assert all(v == pytest.approx(1.0) for v in model.idf())

    def test_df_counts_presence_not_occurrences(self):
        model = fit_tfidf([["a", "a", "a"], ["b"]], min_df=1)
        assert model.doc_freq[model.index_of("a")] == 1

    def test_empty_collection_error(self):
        with pytest.raises(ValueError, match="empty"):
            fit_tfidf([], min_df=1)

    def test_all_empty_docs_give_empty_vocab(self):
        model = fit_tfidf([[], []], min_df=1)
        assert model.vocabulary == ()

    @given(DOCS, st.integers(0, 100))
    @settings(max_examples=30)
    def test_fit_invariant_under_document_permutation(self, docs, seed):
        import random

        shuffled = list(docs)
        random.Random(seed).shuffle(shuffled)
        a = fit_tfidf(docs, min_df=1)
        b = fit_tfidf(shuffled, min_df=1)
        assert a.vocabulary == b.vocabulary
        assert a.doc_freq == b.doc_freq

    def test_vocabulary_is_code_point_sorted(self):
        model = fit_tfidf([["b", "a", "é", "B"]], min_df=1)
        assert model.vocabulary == tuple(sorted(model.vocabulary))
        assert model.vocabulary == ("B", "a", "b", "é")


class TestTransform:
    @pytest.fixture()
    def model(self):
        return fit_tfidf([["cat", "cat", "dog"], ["dog", "fish"]], min_df=1)

    def test_hand_example(self, model):
        # Independent recomputation of the documented example: weights are
        # count * idf, then L2-normalized.
        idf_cat = math.log(3 / 2) + 1
        pre_cat, pre_dog = 2 * idf_cat, 1.0
        norm = math.hypot(pre_cat, pre_dog)
        v = model.transform(["cat", "cat", "dog"])
        got = dict(zip(v.indices, v.values))
        assert got[model.index_of("cat")] == pytest.approx(pre_cat / norm, rel=1e-12)
        assert got[model.index_of("dog")] == pytest.approx(pre_dog / norm, rel=1e-12)
        # loose sanity band around commonly quoted 4dp values; the exact
        # check above is the real oracle (0.9421556..., 0.3351806...)
        assert got[model.index_of("cat")] == pytest.approx(0.9422, abs=2e-4)
        assert got[model.index_of("dog")] == pytest.approx(0.3352, abs=2e-4)

    def test_oov_only_doc_is_zero_vector(self, model):
        v = model.transform(["zebra"])
        assert v.nnz == 0 and v.norm() == 0.0

    def test_empty_doc_is_zero_vector(self, model):
        assert model.transform([]).nnz == 0

    def test_counts_transform_raw(self, model):
        v = model.transform_counts(["cat", "cat", "dog", "zebra"])
        got = dict(zip(v.indices, v.values))
        assert got == {model.index_of("cat"): 2.0, model.index_of("dog"): 1.0}

    @given(DOCS, st.lists(TOKENS, max_size=10))
    @settings(max_examples=50)
    def test_nonzero_transforms_have_unit_norm(self, docs, doc):
        model = fit_tfidf(docs, min_df=1)
        v = model.transform(doc)
        if v.nnz:
            assert abs(v.norm() - 1.0) < 1e-9

    def test_transform_does_not_mutate_model(self, model):
        before = (model.vocabulary, model.doc_freq, model.n_docs)
        model.transform(["cat", "new", "terms"])
        assert (model.vocabulary, model.doc_freq, model.n_docs) == before


class TestPersistence:
    def test_round_trip(self, tmp_path):
        model = fit_tfidf([["cat", "cat", "dog"], ["dog", "fish"]], min_df=1)
        p = tmp_path / "vec.json"
        vectorizer.save_tfidf(model, str(p))
        loaded = vectorizer.load_tfidf(str(p))
        assert loaded == model
        np.testing.assert_allclose(loaded.idf(), model.idf(), rtol=0, atol=0)

    def test_schema_version_enforced(self, tmp_path):
        p = tmp_path / "vec.json"
        p.write_text(json.dumps({"version": 99, "terms": []}), encoding="utf-8")
        with pytest.raises(ValueError, match="version"):
            vectorizer.load_tfidf(str(p))

    def test_invalid_json_reported_with_path(self, tmp_path):
        p = tmp_path / "vec.json"
        p.write_text("{", encoding="utf-8")
        with pytest.raises(ValueError, match="vec.json"):
            vectorizer.load_tfidf(str(p))

    def test_fingerprint_tracks_content(self):
        a = fit_tfidf([["cat", "dog"], ["dog"]], min_df=1)
        b = fit_tfidf([["cat", "dog"], ["dog"]], min_df=1)
        c = fit_tfidf([["cat", "dog"], ["cat"]], min_df=1)
        assert vectorizer.model_fingerprint(a) == vectorizer.model_fingerprint(b)
        assert vectorizer.model_fingerprint(a) != vectorizer.model_fingerprint(c)
