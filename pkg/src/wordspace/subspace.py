"""Word subspaces and canonical-angle similarity.

A word subspace is the span of the leading principal directions of a
set of word vectors, computed by *uncentered* PCA: the basis consists
of eigenvectors of the autocorrelation matrix

    R = (1/N) * sum_i  x_i x_i^T

for the largest eigenvalues (no mean subtraction).  The frequency-
weighted variant scales column ``i`` of the data matrix by
``sqrt(w_i)`` before the decomposition, which is equivalent to
duplicating column ``i`` exactly ``w_i`` times when the weights are
integers.

Two subspaces are compared through their canonical angles: the
cosines are the singular values of ``Ba^T @ Bb`` for orthonormal bases
``Ba`` and ``Bb``, and the similarity is the mean of the ``t`` largest
squared cosines, a number in [0, 1].
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    NumericalError,
    SubspaceRankError,
    WeightError,
)

# Relative spectrum threshold below which directions are treated as
# rank-deficient and excluded from selectable dimensions.
RANK_RTOL = 1e-10

# Spectrum entries may come out of the solver as tiny negatives; they
# are clamped to zero down to this magnitude and rejected beyond it.
NEGATIVE_EIGENVALUE_TOL = 1e-12


@dataclass(frozen=True)
class Subspace:
    """Orthonormal basis with its retained-variance spectrum.

    ``basis`` is (ambient_dimension, dimension) with orthonormal
    columns; ``spectrum`` holds the matching eigenvalues of the
    (weighted) autocorrelation matrix, non-increasing; and
    ``source_word_count`` records how many vectors the subspace was
    built from.
    """

    basis: np.ndarray
    spectrum: np.ndarray
    source_word_count: int

    def __post_init__(self):
        basis = np.ascontiguousarray(self.basis, dtype=np.float64)
        spectrum = np.asarray(self.spectrum, dtype=np.float64)
        if basis.ndim != 2 or basis.shape[1] < 1:
            raise NumericalError("basis must be a p x m matrix with m >= 1")
        if basis.shape[1] > basis.shape[0]:
            raise NumericalError("subspace dimension exceeds ambient dimension")
        if spectrum.shape != (basis.shape[1],):
            raise NumericalError("spectrum length must match basis dimension")
        if np.any(np.diff(spectrum) > 0):
            raise NumericalError("spectrum must be non-increasing")
        if np.any(spectrum < -NEGATIVE_EIGENVALUE_TOL):
            raise NumericalError("spectrum has a significantly negative entry")
        spectrum = np.maximum(spectrum, 0.0)
        basis.setflags(write=False)
        spectrum.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "spectrum", spectrum)

    @property
    def ambient_dimension(self):
        return self.basis.shape[0]

    @property
    def dimension(self):
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Basis-independent representation ``B @ B.T``."""
        return self.basis @ self.basis.T

    def truncated(self, m: int) -> "Subspace":
        """Subspace of the ``m`` leading directions (m <= dimension)."""
        if not 1 <= m <= self.dimension:
            raise SubspaceRankError(m, self.dimension)
        if m == self.dimension:
            return self
        return Subspace(self.basis[:, :m], self.spectrum[:m], self.source_word_count)


def unit_columns(X: np.ndarray) -> np.ndarray:
    """Scale each column to unit Euclidean norm.

    Raises ``DegenerateInputError`` on a zero-norm column.
    """
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0.0):
        raise DegenerateInputError("zero-norm column cannot be normalized")
    return X / norms


def _validate_data_matrix(X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] < 1:
        raise DegenerateInputError("need a p x N matrix with N >= 1 columns")
    if not np.all(np.isfinite(X)):
        raise DegenerateInputError("data matrix contains non-finite values")
    if np.any(np.linalg.norm(X, axis=0) == 0.0):
        raise DegenerateInputError("data matrix contains a zero-norm column")
    return X


def _spectral_basis(X, normalizer):
    """Leading left singular directions of X with spectrum sigma^2 / normalizer.

    Uses the eigendecomposition of ``X @ X.T`` when the ambient side is
    the small one and an economy SVD otherwise; both give the
    eigenvectors of the (weighted) autocorrelation matrix.
    """
    p, n = X.shape
    if p <= n:
        evals, evecs = np.linalg.eigh(X @ X.T)
        order = np.argsort(evals)[::-1]
        spectrum = evals[order] / normalizer
        basis = evecs[:, order]
    else:
        basis, sing, _ = np.linalg.svd(X, full_matrices=False)
        spectrum = (sing * sing) / normalizer
        # Rebuild exact orthonormality lost to tiny-singular-value noise.
        basis, _ = np.linalg.qr(basis)
    spectrum = np.maximum(spectrum, 0.0)
    return basis, spectrum


def _selectable_rank(spectrum):
    if spectrum[0] <= 0.0:
        return 0
    return int(np.count_nonzero(spectrum > RANK_RTOL * spectrum[0]))


def _validate_weights(X, weights):
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (X.shape[1],):
        raise WeightError(
            f"need one weight per column: got {w.shape} for {X.shape[1]} columns"
        )
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise WeightError("weights must be positive finite reals")
    return w


def full_word_subspace(X: np.ndarray, max_dim: int = None) -> Subspace:
    """Subspace at the full selectable rank (optionally capped).

    Callers that sweep dimension grids build this once and slice
    prefixes with `Subspace.truncated`.
    """
    X = _validate_data_matrix(X)
    basis, spectrum = _spectral_basis(X, float(X.shape[1]))
    cap = _selectable_rank(spectrum)
    if cap == 0:
        raise DegenerateInputError("data matrix has numerical rank zero")
    m = cap if max_dim is None else max(1, min(max_dim, cap))
    return Subspace(basis[:, :m], spectrum[:m], X.shape[1])


def full_weighted_word_subspace(X: np.ndarray, weights, max_dim: int = None) -> Subspace:
    """Weighted variant of `full_word_subspace`."""
    X = _validate_data_matrix(X)
    w = _validate_weights(X, weights)
    basis, spectrum = _spectral_basis(X * np.sqrt(w), float(np.sum(w)))
    cap = _selectable_rank(spectrum)
    if cap == 0:
        raise DegenerateInputError("data matrix has numerical rank zero")
    m = cap if max_dim is None else max(1, min(max_dim, cap))
    return Subspace(basis[:, :m], spectrum[:m], X.shape[1])


def word_subspace(X: np.ndarray, m: int) -> Subspace:
    """Model a set of word vectors as an ``m``-dimensional subspace.

    Parameters
    ----------
    X : (p, N) array
        One word vector per column, all finite, none zero.
    m : int
        Target dimension; must not exceed the numerical rank of X.

    Returns
    -------
    Subspace
        Basis of the ``m`` leading eigenvectors of the uncentered
        autocorrelation matrix, spectrum of matching eigenvalues.
    """
    X = _validate_data_matrix(X)
    basis, spectrum = _spectral_basis(X, float(X.shape[1]))
    cap = _selectable_rank(spectrum)
    if not 1 <= m <= cap:
        raise SubspaceRankError(m, cap)
    return Subspace(basis[:, :m], spectrum[:m], X.shape[1])


def weighted_word_subspace(X: np.ndarray, weights, m: int) -> Subspace:
    """Frequency-weighted variant of `word_subspace`.

    Column ``i`` is scaled by ``sqrt(weights[i])`` and the basis is
    taken from the SVD of the scaled matrix; the spectrum is the
    squared singular values divided by ``sum(weights)``, so integer
    weights reproduce `word_subspace` on a column-duplicated matrix.
    """
    X = _validate_data_matrix(X)
    w = _validate_weights(X, weights)
    basis, spectrum = _spectral_basis(X * np.sqrt(w), float(np.sum(w)))
    cap = _selectable_rank(spectrum)
    if not 1 <= m <= cap:
        raise SubspaceRankError(m, cap)
    return Subspace(basis[:, :m], spectrum[:m], X.shape[1])


def canonical_cosines(a: Subspace, b: Subspace) -> np.ndarray:
    """Cosines of the canonical angles between two subspaces.

    The ``min(dim_a, dim_b)`` singular values of ``a.basis.T @ b.basis``,
    clamped into [0, 1], non-increasing.
    """
    if a.ambient_dimension != b.ambient_dimension:
        raise DimensionMismatchError(
            f"ambient dimensions differ: {a.ambient_dimension} vs {b.ambient_dimension}"
        )
    sing = np.linalg.svd(a.basis.T @ b.basis, compute_uv=False)
    return np.clip(sing, 0.0, 1.0)


def similarity(a: Subspace, b: Subspace, t: int) -> float:
    """Mean of the ``t`` largest squared canonical cosines (in [0, 1])."""
    limit = min(a.dimension, b.dimension)
    if not 1 <= t <= limit:
        raise NumericalError(
            f"angle count t={t} out of range [1, {limit}]"
        )
    if t == limit:
        # Sum of all squared canonical cosines is the squared Frobenius
        # norm of the basis product; no SVD needed.
        g = a.basis.T @ b.basis
        total = float(np.sum(g * g))
        return min(total / t, 1.0)
    cos = canonical_cosines(a, b)
    return float(np.mean(cos[:t] ** 2))
