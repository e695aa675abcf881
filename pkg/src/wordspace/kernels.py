"""Loop-bound numeric kernels with a numba fast lane.

Two inner loops in this package are genuinely Python-loop-bound rather
than BLAS/LAPACK-bound: the per-sample hinge-loss subgradient updates
of the linear SVM and the dense sweep over (class-dim, query-dim)
hyperparameter grids.  Both are provided in two interchangeable
implementations:

* a numba ``@njit`` lane (default when numba is importable), and
* a pure-numpy/Python fallback lane.

Set ``WORDSPACE_NUMBA=0`` in the environment to force the fallback
lane.  ``benchmarks/bench_kernels.py`` times one lane against the
other.  The lanes perform the same arithmetic and agree within
floating-point roundoff.
"""

import os

import numpy as np

_flag = os.environ.get("WORDSPACE_NUMBA", "1").strip().lower()
_DISABLED = _flag in ("0", "off", "false", "no")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USING_NUMBA = HAVE_NUMBA and not _DISABLED


def grid_mean_sq_cosines_numpy(sq_gram, class_dims, query_dims):
    """Mean squared canonical cosine at every grid point.

    Parameters
    ----------
    sq_gram : (mc_max, mq_max) array
        Elementwise square of ``class_basis.T @ query_basis`` at the
        maximal dimensions.
    class_dims, query_dims : int arrays
        Grid axes; entries larger than the available dimensions must be
        capped by the caller.

    Returns
    -------
    (len(class_dims), len(query_dims)) array of similarities: for the
    grid point (mc, mq), the sum of ``sq_gram[:mc, :mq]`` divided by
    ``min(mc, mq)``.  The sum of *all* squared cosines between two
    subspaces equals the squared Frobenius norm of their basis product,
    so each entry is the subspace similarity with every available angle.
    """
    prefix = np.cumsum(np.cumsum(sq_gram, axis=1), axis=0)
    out = np.empty((len(class_dims), len(query_dims)), dtype=np.float64)
    for i, mc in enumerate(class_dims):
        for j, mq in enumerate(query_dims):
            t = mc if mc < mq else mq
            out[i, j] = min(prefix[mc - 1, mq - 1] / t, 1.0)
    return out


def _grid_mean_sq_cosines_loops(sq_gram, class_dims, query_dims):
    mc_max, mq_max = sq_gram.shape
    prefix = np.empty((mc_max, mq_max), dtype=np.float64)
    for r in range(mc_max):
        acc = 0.0
        for c in range(mq_max):
            acc += sq_gram[r, c]
            prefix[r, c] = acc if r == 0 else prefix[r - 1, c] + acc
    out = np.empty((len(class_dims), len(query_dims)), dtype=np.float64)
    for i in range(len(class_dims)):
        for j in range(len(query_dims)):
            mc = class_dims[i]
            mq = query_dims[j]
            t = mc if mc < mq else mq
            s = prefix[mc - 1, mq - 1] / t
            out[i, j] = 1.0 if s > 1.0 else s
    return out


def hinge_sgd_numpy(data, indices, indptr, labels, lam, epochs, order, n_features):
    """Pegasos-style subgradient descent for one binary hinge problem.

    CSR arrays describe the sample matrix (one row per sample, bias
    column NOT included; the bias is an implicit all-ones feature).
    ``labels`` is +-1 per sample, ``order`` is an (epochs, n_samples)
    array of visiting orders, and the learning rate at global step t is
    1 / (lam * (t + 1)).  Returns the augmented weight vector of length
    ``n_features + 1`` whose last entry is the bias weight.

    The shrinking factor (1 - lr*lam) is carried as a running scale so
    each update touches only the sample's nonzeros.
    """
    u = np.zeros(n_features + 1, dtype=np.float64)
    scale = 1.0
    step = 0
    for e in range(epochs):
        for i in order[e]:
            step += 1
            lr = 1.0 / (lam * (step + 1))
            lo, hi = indptr[i], indptr[i + 1]
            cols = indices[lo:hi]
            vals = data[lo:hi]
            score = scale * (np.dot(u[cols], vals) + u[n_features])
            y = labels[i]
            scale *= 1.0 - lr * lam
            if y * score < 1.0:
                g = lr * y / scale
                u[cols] += g * vals
                u[n_features] += g
            if scale < 1e-100:
                u *= scale
                scale = 1.0
    return u * scale


def _hinge_sgd_loops(data, indices, indptr, labels, lam, epochs, order, n_features):
    u = np.zeros(n_features + 1, dtype=np.float64)
    scale = 1.0
    step = 0
    for e in range(epochs):
        for k in range(order.shape[1]):
            i = order[e, k]
            step += 1
            lr = 1.0 / (lam * (step + 1))
            lo = indptr[i]
            hi = indptr[i + 1]
            acc = 0.0
            for z in range(lo, hi):
                acc += u[indices[z]] * data[z]
            score = scale * (acc + u[n_features])
            y = labels[i]
            scale *= 1.0 - lr * lam
            if y * score < 1.0:
                g = lr * y / scale
                for z in range(lo, hi):
                    u[indices[z]] += g * data[z]
                u[n_features] += g
            if scale < 1e-100:
                for z in range(n_features + 1):
                    u[z] *= scale
                scale = 1.0
    return u * scale


if USING_NUMBA:
    grid_mean_sq_cosines = njit(cache=True)(_grid_mean_sq_cosines_loops)
    hinge_sgd = njit(cache=True)(_hinge_sgd_loops)
else:
    grid_mean_sq_cosines = grid_mean_sq_cosines_numpy
    hinge_sgd = hinge_sgd_numpy


def active_lane() -> str:
    """Which kernel lane is in use ("numba" or "numpy")."""
    return "numba" if USING_NUMBA else "numpy"
