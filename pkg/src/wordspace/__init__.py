"""Text classification with word subspaces.

Documents are modeled as low-dimensional linear subspaces of a word
embedding space (plain or frequency-weighted uncentered PCA) and
classified by canonical-angle similarity, alongside classic baselines
(similarity average, naive Bayes, LSA, linear SVM) and a
cross-validation evaluation harness.
"""

from .classifiers import (
    Prediction,
    predict_subspace,
    train_msm,
    train_sa,
    train_tfmsm,
)
from .corpus import (
    BowVector,
    Corpus,
    Document,
    Vocabulary,
    bow,
    class_word_multiset,
    idf,
    parse_corpus,
    tf,
)
from .embeddings import (
    EmbeddingTable,
    filter_roman,
    load_binary,
    load_text,
    lookup_all,
    save_text,
)
from .evaluation import (
    EvalReport,
    FoldPlan,
    make_folds,
    paired_ttest,
    run_experiment,
    select_hyperparams,
    spectrum_report,
)
from .subspace import (
    Subspace,
    canonical_cosines,
    similarity,
    weighted_word_subspace,
    word_subspace,
)

__version__ = "0.1.0"

__all__ = [
    "BowVector", "Corpus", "Document", "EmbeddingTable", "EvalReport",
    "FoldPlan", "Prediction", "Subspace", "Vocabulary", "bow",
    "canonical_cosines", "class_word_multiset", "filter_roman", "idf",
    "load_binary", "load_text", "lookup_all", "make_folds", "paired_ttest",
    "parse_corpus", "predict_subspace", "run_experiment", "save_text",
    "select_hyperparams", "similarity", "spectrum_report", "tf", "train_msm",
    "train_sa", "train_tfmsm", "weighted_word_subspace", "word_subspace",
]
