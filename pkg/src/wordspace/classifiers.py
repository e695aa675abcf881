"""Subspace-based classification strategies.

MSM models each class's distinct in-vocabulary words as a word
subspace and scores a query by the mean squared canonical cosine
between the query's subspace and each class subspace; the TF-weighted
variant weights every distinct word by its occurrence count (class
totals at training time, in-document counts at query time).  The
similarity-average baseline scores a query by the mean pairwise inner
product between the two sets of distinct unit word vectors.

All strategies share the prediction contract: per-class scores, the
argmax label, and a tie flag; ties are broken by class order with the
first class winning.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .embeddings import EmbeddingTable, lookup_all
from .errors import DegenerateQueryError, TrainingDataError
from .subspace import (
    Subspace,
    full_weighted_word_subspace,
    full_word_subspace,
    similarity,
    unit_columns,
)

log = logging.getLogger(__name__)

STRATEGIES = ("msm", "tfmsm", "sa", "mvb", "mnb", "lsa", "svm")

# Natural feature scheme per strategy; lsa and svm accept any.
DEFAULT_FEATURES = {
    "msm": "w2v",
    "tfmsm": "w2v",
    "sa": "w2v",
    "mvb": "binbow",
    "mnb": "tfbow",
    "lsa": "binbow",
    "svm": "binbow",
}


@dataclass(frozen=True)
class Prediction:
    """Chosen label with the per-class score vector that produced it."""

    label: str
    scores: np.ndarray
    tie: bool


def make_prediction(classes, scores) -> Prediction:
    scores = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise ValueError("prediction scores must be finite")
    best = int(np.argmax(scores))
    tie = int(np.count_nonzero(scores == scores[best])) > 1
    return Prediction(classes[best], scores, tie)


def class_vectors(corpus: Corpus, table: EmbeddingTable, label: str):
    """Distinct in-vocabulary word vectors of a class with class-total counts."""
    tokens = [t for doc in corpus.documents_of(label) for t in doc.tokens]
    matrix, counts, oov = lookup_all(table, tokens)
    if matrix.shape[1] == 0:
        raise TrainingDataError(f"class {label!r} has no in-vocabulary words")
    if oov:
        log.debug("class %s: %d words out of vocabulary", label, len(oov))
    return matrix, counts


class SubspaceModel:
    """Per-class word subspaces plus query-time policies."""

    def __init__(self, strategy, classes, subspaces, word_counts, *,
                 class_dim, query_dim=None, angle_count=None, normalize=True,
                 embed_dim=None):
        self.strategy = strategy
        self.classes = tuple(classes)
        self.subspaces = dict(subspaces)
        self.word_counts = dict(word_counts)
        self.class_dim = class_dim
        self.query_dim = query_dim
        self.angle_count = angle_count
        self.normalize = normalize
        self.embed_dim = embed_dim

    @property
    def weighted(self):
        return self.strategy == "tfmsm"

    def predict(self, tokens, table: EmbeddingTable, query_dim=None,
                angle_count=None) -> Prediction:
        return predict_subspace(
            self, tokens, table,
            query_dim=self.query_dim if query_dim is None else query_dim,
            angle_count=self.angle_count if angle_count is None else angle_count,
        )


def _train_subspace_model(strategy, corpus, table, class_dim, normalize, weighted):
    subspaces = {}
    word_counts = {}
    for label in corpus.classes:
        matrix, counts = class_vectors(corpus, table, label)
        if normalize:
            matrix = unit_columns(matrix)
        if weighted:
            sub = full_weighted_word_subspace(matrix, counts, class_dim)
        else:
            sub = full_word_subspace(matrix, class_dim)
        subspaces[label] = sub
        word_counts[label] = matrix.shape[1]
    return SubspaceModel(
        strategy, corpus.classes, subspaces, word_counts,
        class_dim=class_dim, normalize=normalize, embed_dim=table.dimension,
    )


def train_msm(corpus: Corpus, table: EmbeddingTable, class_dim: int = None,
              normalize: bool = True) -> SubspaceModel:
    """Model each class's distinct words as a word subspace.

    ``class_dim`` is a policy upper bound: every class uses
    ``min(class_dim, numerical rank)`` dimensions (full rank if None).
    """
    return _train_subspace_model("msm", corpus, table, class_dim, normalize, False)


def train_tfmsm(corpus: Corpus, table: EmbeddingTable, class_dim: int = None,
                normalize: bool = True) -> SubspaceModel:
    """As `train_msm` but each word is weighted by its class frequency."""
    return _train_subspace_model("tfmsm", corpus, table, class_dim, normalize, True)


def query_subspace(model: SubspaceModel, tokens, table: EmbeddingTable,
                   query_dim: int = None) -> Subspace:
    """Build the query document's subspace under the model's policies."""
    matrix, counts, _ = lookup_all(table, tokens)
    if matrix.shape[1] == 0:
        raise DegenerateQueryError("query has no in-vocabulary words")
    if model.normalize:
        matrix = unit_columns(matrix)
    if model.weighted:
        return full_weighted_word_subspace(matrix, counts, query_dim)
    return full_word_subspace(matrix, query_dim)


def predict_subspace(model: SubspaceModel, tokens, table: EmbeddingTable,
                     query_dim: int = None, angle_count: int = None) -> Prediction:
    """Classify a token sequence by subspace similarity.

    ``query_dim`` caps the query subspace dimension (rank-capped);
    ``angle_count`` caps the number of canonical angles, which defaults
    to every available angle, i.e. min(class dim, query dim).
    """
    query = query_subspace(model, tokens, table, query_dim)
    scores = np.empty(len(model.classes), dtype=np.float64)
    for j, label in enumerate(model.classes):
        sub = model.subspaces[label]
        t = min(sub.dimension, query.dimension)
        if angle_count is not None:
            t = min(t, angle_count)
        scores[j] = similarity(sub, query, t)
    return make_prediction(model.classes, scores)


class SimilarityAverageModel:
    """Mean pairwise inner product between sets of distinct unit vectors.

    The double sum over all vector pairs factorizes into the inner
    product of the two set-sum vectors, so each class is stored as the
    sum of its distinct unit word vectors plus the set size.
    """

    strategy = "sa"

    def __init__(self, classes, sums, counts, *, embed_dim, normalize=True):
        self.classes = tuple(classes)
        self.sums = np.asarray(sums, dtype=np.float64)
        self.counts = np.asarray(counts, dtype=np.int64)
        self.embed_dim = embed_dim
        self.normalize = normalize  # kept for the model container; SA always normalizes

    def predict(self, tokens, table: EmbeddingTable, **_ignored) -> Prediction:
        matrix, _, _ = lookup_all(table, tokens)
        if matrix.shape[1] == 0:
            raise DegenerateQueryError("query has no in-vocabulary words")
        matrix = unit_columns(matrix)
        qsum = matrix.sum(axis=1)
        scores = (self.sums @ qsum) / (self.counts * matrix.shape[1])
        return make_prediction(self.classes, scores)


def train_sa(corpus: Corpus, table: EmbeddingTable,
             normalize: bool = True) -> SimilarityAverageModel:
    """One sum-of-unit-vectors artifact per class."""
    sums = np.zeros((len(corpus.classes), table.dimension), dtype=np.float64)
    counts = np.zeros(len(corpus.classes), dtype=np.int64)
    for j, label in enumerate(corpus.classes):
        matrix, _ = class_vectors(corpus, table, label)
        matrix = unit_columns(matrix)
        sums[j] = matrix.sum(axis=1)
        counts[j] = matrix.shape[1]
    return SimilarityAverageModel(
        corpus.classes, sums, counts, embed_dim=table.dimension, normalize=normalize
    )
