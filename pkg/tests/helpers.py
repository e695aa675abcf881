"""Shared fixtures builders and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths:
naive Bayes is evaluated with plain (non-log) arithmetic, nearest
neighbor with raw cosines, and canonical angles through a dense
eigensolver.
"""

import itertools
from fractions import Fraction

import numpy as np

from wordspace.corpus import Corpus, Document
from wordspace.embeddings import EmbeddingTable


def orthogonal_table(n_classes, words_per_class, extra_dims=0):
    """Embedding table whose class vocabularies span disjoint axes.

    Word ``w<c>_<i>`` of class ``c`` maps to standard basis vector
    ``e_{c * words_per_class + i}``.
    """
    p = n_classes * words_per_class + extra_dims
    words = []
    rows = []
    for c in range(n_classes):
        for i in range(words_per_class):
            words.append(f"w{c}_{i}")
            rows.append(np.eye(p)[c * words_per_class + i])
    return EmbeddingTable(words, np.asarray(rows))


def synth_corpus(n_classes, words_per_class, docs_per_class, tokens_per_doc,
                 rng, unique_words=False):
    """Corpus whose class ``c`` draws tokens from class ``c``'s words.

    With ``unique_words`` every token in a class appears exactly once
    across the whole class (token count permitting).
    """
    docs = []
    for c in range(n_classes):
        pool = [f"w{c}_{i}" for i in range(words_per_class)]
        if unique_words:
            seq = list(pool)
            rng.shuffle(seq)
            per_doc = max(1, len(seq) // docs_per_class)
            for d in range(docs_per_class):
                chunk = seq[d * per_doc:(d + 1) * per_doc] or [pool[0]]
                docs.append(Document(f"c{c}", tuple(chunk)))
        else:
            for _ in range(docs_per_class):
                tokens = rng.choice(pool, size=tokens_per_doc, replace=True)
                docs.append(Document(f"c{c}", tuple(tokens.tolist())))
    order = rng.permutation(len(docs))
    return Corpus([docs[i] for i in order])


def random_subspace_basis(rng, p, m):
    """Orthonormal basis of a uniformly random m-dim subspace in R^p."""
    q, _ = np.linalg.qr(rng.standard_normal((p, m)))
    return q[:, :m]


def cosines_by_eigensolver(basis_a, basis_b):
    """Canonical cosines via eigenvalues of Yq^T Yc Yc^T Yq (dense path)."""
    product = basis_b.T @ basis_a @ basis_a.T @ basis_b
    evals = np.linalg.eigvalsh(product)[::-1]
    keep = min(basis_a.shape[1], basis_b.shape[1])
    return np.sqrt(np.clip(evals[:keep], 0.0, 1.0))


def exact_cosine_1nn_maximizers(train_rows, train_labels, classes, query_row):
    """Classes whose best training doc attains the exact maximal cosine.

    Rows must be integer-valued so the comparison can run in exact
    rational arithmetic: cosines are ordered through the key
    ``(sign(r.q), sign * (r.q)^2 / (r.r))`` (the query norm is a shared
    positive factor and drops out).  Returns None when the query or
    every training row is zero.
    """
    q = [int(v) for v in query_row]
    if not any(q):
        return None
    best = {}
    for row, label in zip(train_rows, train_labels):
        r = [int(v) for v in row]
        rr = sum(v * v for v in r)
        if rr == 0:
            continue
        rq = sum(a * b for a, b in zip(r, q))
        sign = (rq > 0) - (rq < 0)
        key = (sign, Fraction(sign * rq * rq, rr))
        if label not in best or key > best[label]:
            best[label] = key
    if not best:
        return None
    top = max(best.values())
    return {c for c in classes if best.get(c) == top}


# ---------------------------------------------------------------------------
# Exact-arithmetic naive Bayes oracle
# ---------------------------------------------------------------------------

def nb_oracle_scores(kind, docs, labels, classes, vocab, query_tokens):
    """Per-class scores as exact rationals, straight from the definitions.

    prior(c) = (1+|D_c|) / (|C|+|D|) and P(w|c) = (1+|D_c^w|) / (|C|+|D|);
    the Bernoulli model multiplies P or (1-P) per vocabulary term, the
    multinomial model multiplies P^count per term (the class-independent
    length factor is dropped; it cannot change the argmax).
    """
    denom = len(classes) + len(docs)
    scores = []
    for c in classes:
        members = [d for d, lab in zip(docs, labels) if lab == c]
        score = Fraction(1 + len(members), denom)
        for w in vocab:
            dfw = sum(1 for d in members if w in d)
            p = Fraction(1 + dfw, denom)
            if kind == "mvb":
                score *= p if w in query_tokens else (1 - p)
            else:
                score *= p ** query_tokens.count(w)
        scores.append(score)
    return scores


def nb_oracle_maximizers(kind, docs, labels, classes, vocab, query_tokens):
    """Set of class labels attaining the exact maximal score."""
    scores = nb_oracle_scores(kind, docs, labels, classes, vocab, query_tokens)
    top = max(scores)
    return {c for c, s in zip(classes, scores) if s == top}


def enumerate_nb_corpora(max_cases=None):
    """Deterministic family of tiny two-class corpora.

    Document contents run over all token tuples of length 1..2 from a
    two-word vocabulary, with an extra slice of three-word-vocabulary
    and three-token-document cases for breadth.
    """
    cases = []
    two = ["a", "b"]
    contents2 = [(w,) for w in two] + [
        (x, y) for x in two for y in two
    ]
    # every ordered pair of documents, one per class
    for d1, d2 in itertools.product(contents2, repeat=2):
        cases.append(([d1, d2], ["c1", "c2"], two))
    # three documents, both class patterns with two classes present
    for pattern in (["c1", "c2", "c2"], ["c1", "c1", "c2"]):
        for d1, d2, d3 in itertools.product(contents2, repeat=3):
            cases.append(([d1, d2, d3], pattern, two))
    three = ["a", "b", "c"]
    contents3 = [(x, y, z) for x in three for y in three for z in three][::5]
    for d1, d2 in itertools.product(contents3[:6], repeat=2):
        cases.append(([d1, d2, ("a",), ("b", "c")], ["c1", "c2", "c1", "c2"], three))
    if max_cases is not None:
        cases = cases[:max_cases]
    return cases


def nb_queries(vocab):
    """Probe documents: empty, singles, one pair, and an OOV mix."""
    probes = [(), (vocab[0],), (vocab[-1],), (vocab[0], vocab[0]),
              (vocab[0], vocab[-1], vocab[0])]
    probes.append((vocab[0], "zzz"))
    return probes
