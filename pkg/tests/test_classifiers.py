import numpy as np
import pytest

from helpers import orthogonal_table
from wordspace.classifiers import (
    SimilarityAverageModel,
    make_prediction,
    predict_subspace,
    train_msm,
    train_sa,
    train_tfmsm,
)
from wordspace.corpus import Corpus, Document
from wordspace.embeddings import EmbeddingTable
from wordspace.errors import DegenerateQueryError, TrainingDataError
from wordspace.model_io import load_model, save_model
from wordspace.subspace import similarity

PROJECTOR_TOL = 1e-6


def max_abs(a):
    return float(np.max(np.abs(a)))


@pytest.fixture
def ortho_table():
    # 2 classes x 3 words on disjoint axes, plus 2 free axes for queries
    return orthogonal_table(2, 3, extra_dims=2)


@pytest.fixture
def ortho_corpus():
    return Corpus([
        Document("c0", ("w0_0", "w0_1")),
        Document("c0", ("w0_1", "w0_2")),
        Document("c1", ("w1_0", "w1_1", "w1_2")),
    ])


class TestTrainMsm:
    def test_disjoint_classes_have_zero_similarity(self, ortho_table, ortho_corpus):
        model = train_msm(ortho_corpus, ortho_table)
        a, b = model.subspaces["c0"], model.subspaces["c1"]
        t = min(a.dimension, b.dimension)
        assert similarity(a, b, t) == pytest.approx(0.0, abs=1e-15)

    def test_fully_oov_class_errors(self, ortho_table):
        corpus = Corpus([Document("c0", ("w0_0",)), Document("bad", ("zzz",))])
        with pytest.raises(TrainingDataError, match="bad"):
            train_msm(corpus, ortho_table)

    def test_duplicates_do_not_change_model(self, ortho_table):
        plain = Corpus([Document("c0", ("w0_0", "w0_1")),
                        Document("c1", ("w1_0",))])
        doubled = Corpus([Document("c0", ("w0_0", "w0_1", "w0_0", "w0_1")),
                          Document("c1", ("w1_0", "w1_0"))])
        a = train_msm(plain, ortho_table)
        b = train_msm(doubled, ortho_table)
        for label in a.classes:
            assert max_abs(a.subspaces[label].projector()
                           - b.subspaces[label].projector()) < PROJECTOR_TOL

    def test_class_dim_policy_caps_by_rank(self, ortho_table, ortho_corpus):
        model = train_msm(ortho_corpus, ortho_table, class_dim=50)
        assert model.subspaces["c0"].dimension == 3
        assert model.subspaces["c1"].dimension == 3


class TestTrainTfmsm:
    def test_single_occurrences_reduce_to_msm(self, ortho_table):
        corpus = Corpus([Document("c0", ("w0_0", "w0_1")),
                         Document("c0", ("w0_2",)),
                         Document("c1", ("w1_0", "w1_1"))])
        plain = train_msm(corpus, ortho_table)
        weighted = train_tfmsm(corpus, ortho_table)
        for label in plain.classes:
            assert max_abs(plain.subspaces[label].projector()
                           - weighted.subspaces[label].projector()) < PROJECTOR_TOL

    def test_dominant_word_aligns_first_direction(self, ortho_table):
        docs = [Document("c0", ("w0_0",) * 100 + ("w0_1", "w0_2")),
                Document("c1", ("w1_0",))]
        model = train_tfmsm(Corpus(docs), ortho_table, class_dim=1)
        first = model.subspaces["c0"].basis[:, 0]
        target = ortho_table.vector("w0_0")
        angle = np.arccos(np.clip(abs(first @ target), -1.0, 1.0))
        assert angle <= 1e-3

    def test_empty_class_errors(self, ortho_table):
        corpus = Corpus([Document("c0", ()), Document("c1", ("w1_0",))])
        with pytest.raises(TrainingDataError, match="c0"):
            train_tfmsm(corpus, ortho_table)


class TestPredictSubspace:
    def test_exact_training_words_score_one(self, ortho_table, ortho_corpus):
        model = train_msm(ortho_corpus, ortho_table)
        pred = model.predict(("w0_0", "w0_1", "w0_2"), ortho_table)
        assert pred.label == "c0"
        assert pred.scores[0] == pytest.approx(1.0)

    def test_orthogonal_query_ties_to_first_class(self, ortho_corpus):
        table = orthogonal_table(2, 3, extra_dims=2)
        # give the query words their own axes
        words = list(table.words) + ["q_0", "q_1"]
        rows = np.vstack([np.stack([table.vector(w) for w in table.words]),
                          np.eye(8)[6:], ])
        table = EmbeddingTable(words, rows)
        model = train_msm(ortho_corpus, table)
        pred = model.predict(("q_0", "q_1"), table)
        assert pred.tie
        assert pred.label == "c0"
        np.testing.assert_allclose(pred.scores, [0.0, 0.0], atol=1e-15)

    def test_single_unique_word(self, ortho_table, ortho_corpus):
        model = train_msm(ortho_corpus, ortho_table)
        pred = model.predict(("w1_2",), ortho_table)
        assert pred.label == "c1"
        assert not pred.tie

    def test_degenerate_queries(self, ortho_table, ortho_corpus):
        model = train_msm(ortho_corpus, ortho_table)
        with pytest.raises(DegenerateQueryError):
            model.predict((), ortho_table)
        with pytest.raises(DegenerateQueryError):
            model.predict(("not-a-word",), ortho_table)

    def test_query_dim_and_angle_count_policies(self, ortho_table, ortho_corpus):
        model = train_msm(ortho_corpus, ortho_table)
        query = ("w0_0", "w0_1", "w1_0")
        full = predict_subspace(model, query, ortho_table)
        capped = predict_subspace(model, query, ortho_table, query_dim=1)
        assert full.scores.shape == capped.scores.shape
        one_angle = predict_subspace(model, query, ortho_table, angle_count=1)
        assert np.all(one_angle.scores >= full.scores - 1e-12)

    def test_tfmsm_prediction_uses_document_counts(self, ortho_table):
        corpus = Corpus([Document("c0", ("w0_0", "w0_1", "w0_2")),
                         Document("c1", ("w1_0", "w1_1", "w1_2"))])
        model = train_tfmsm(corpus, ortho_table, class_dim=1)
        # heavy repetition of a c1 word must pull the query toward c1
        pred = model.predict(("w1_0",) * 50 + ("w0_0",), ortho_table, query_dim=1)
        assert pred.label == "c1"


class TestSimilarityAverage:
    def make_table(self):
        return EmbeddingTable(["a", "b", "c"], np.eye(3))

    def test_identical_singletons(self):
        table = self.make_table()
        model = train_sa(Corpus([Document("c0", ("a",)),
                                 Document("c1", ("b",))]), table)
        pred = model.predict(("a",), table)
        assert pred.scores[0] == pytest.approx(1.0)
        assert pred.scores[1] == pytest.approx(0.0)
        assert pred.label == "c0"

    def test_half_overlap(self):
        table = self.make_table()
        model = train_sa(Corpus([Document("c0", ("a", "b")),
                                 Document("c1", ("c",))]), table)
        # mean pairwise inner product between {a, b} and {a}: (1 + 0) / 2
        pred = model.predict(("a",), table)
        assert pred.scores[0] == pytest.approx(0.5)

    def test_repeated_words_counted_once(self):
        table = self.make_table()
        once = train_sa(Corpus([Document("c0", ("a", "b")),
                                Document("c1", ("c",))]), table)
        many = train_sa(Corpus([Document("c0", ("a", "a", "b", "b", "a")),
                                Document("c1", ("c", "c"))]), table)
        np.testing.assert_allclose(once.sums, many.sums)
        np.testing.assert_array_equal(once.counts, many.counts)

    def test_degenerate_query(self):
        table = self.make_table()
        model = train_sa(Corpus([Document("c0", ("a",)),
                                 Document("c1", ("b",))]), table)
        with pytest.raises(DegenerateQueryError):
            model.predict(("zzz",), table)

    def test_non_unit_vectors_are_normalized(self):
        table = EmbeddingTable(["a", "b"], np.array([[10.0, 0.0], [0.0, 0.2]]))
        model = train_sa(Corpus([Document("c0", ("a",)),
                                 Document("c1", ("b",))]), table)
        pred = model.predict(("a",), table)
        assert pred.scores[0] == pytest.approx(1.0)


class TestPredictionContract:
    def test_argmax_invariance_under_positive_scaling(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            scores = rng.random(5)
            base = make_prediction(("a", "b", "c", "d", "e"), scores)
            scaled = make_prediction(("a", "b", "c", "d", "e"), scores * 17.5)
            shifted = make_prediction(("a", "b", "c", "d", "e"), scores + 3.0)
            assert base.label == scaled.label == shifted.label

    def test_tie_flag_and_first_class(self):
        pred = make_prediction(("x", "y"), np.array([2.0, 2.0]))
        assert pred.tie and pred.label == "x"

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            make_prediction(("x",), np.array([np.nan]))


class TestDeterminismAndRoundtrip:
    def test_training_is_bit_reproducible(self, ortho_table, ortho_corpus):
        a = train_msm(ortho_corpus, ortho_table)
        b = train_msm(ortho_corpus, ortho_table)
        for label in a.classes:
            np.testing.assert_array_equal(a.subspaces[label].basis,
                                          b.subspaces[label].basis)

    def test_subspace_model_roundtrip(self, tmp_path, ortho_table, ortho_corpus):
        model = train_tfmsm(ortho_corpus, ortho_table, class_dim=2)
        model.query_dim = 5
        path = tmp_path / "model.npz"
        save_model(model, path)
        again = load_model(path)
        assert again.strategy == "tfmsm"
        assert again.classes == model.classes
        assert again.query_dim == 5
        query = ("w0_0", "w1_1")
        np.testing.assert_array_equal(
            model.predict(query, ortho_table).scores,
            again.predict(query, ortho_table).scores,
        )

    def test_sa_model_roundtrip(self, tmp_path, ortho_table, ortho_corpus):
        model = train_sa(ortho_corpus, ortho_table)
        path = tmp_path / "model.npz"
        save_model(model, path)
        again = load_model(path)
        assert isinstance(again, SimilarityAverageModel)
        np.testing.assert_array_equal(model.sums, again.sums)
