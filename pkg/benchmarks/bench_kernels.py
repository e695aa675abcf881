"""Time the numba kernel lane against the pure-numpy fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

The numba lane is whatever `wordspace.kernels` selected at import time
(set WORDSPACE_NUMBA=0 to verify the fallback wiring); both lanes are
imported explicitly here, so a single process times the pair.
"""

import time

import numpy as np
import scipy.sparse as sp

from wordspace import kernels

GRID_REPEATS = 200
SGD_REPEATS = 3


def timeit(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_grid_scores():
    rng = np.random.default_rng(0)
    sq_gram = (rng.standard_normal((200, 200)) * 0.1) ** 2
    class_dims = np.array([50, 100, 150, 175, 200], dtype=np.int64)
    query_dims = np.array([1, 5, 10, 25, 50, 100, 200], dtype=np.int64)
    args = (sq_gram, class_dims, query_dims)

    fast = kernels.grid_mean_sq_cosines
    plain = kernels.grid_mean_sq_cosines_numpy
    np.testing.assert_allclose(fast(*args), plain(*args), rtol=1e-12)

    fast(*args)  # trigger compilation before timing
    t_fast = timeit(fast, args, GRID_REPEATS)
    t_plain = timeit(plain, args, GRID_REPEATS)
    print(f"grid_mean_sq_cosines  200x200 gram, 5x7 grid")
    print(f"  {kernels.active_lane():>6}: {t_fast * 1e6:9.1f} us")
    print(f"   numpy: {t_plain * 1e6:9.1f} us   "
          f"(lane speedup x{t_plain / t_fast:.2f})")


def bench_hinge_sgd():
    rng = np.random.default_rng(1)
    n, d, density = 4000, 20000, 0.004
    X = sp.random(n, d, density=density, format="csr", random_state=2,
                  data_rvs=lambda size: rng.random(size) + 0.5)
    labels = rng.choice([-1.0, 1.0], size=n)
    epochs = 5
    order = np.stack([rng.permutation(n) for _ in range(epochs)]).astype(np.int64)
    args = (X.data, X.indices.astype(np.int64), X.indptr.astype(np.int64),
            labels, 1e-4, epochs, order, d)

    fast = kernels.hinge_sgd
    plain = kernels.hinge_sgd_numpy
    np.testing.assert_allclose(fast(*args), plain(*args), rtol=1e-9, atol=1e-12)

    fast(*args)
    t_fast = timeit(fast, args, SGD_REPEATS)
    t_plain = timeit(plain, args, SGD_REPEATS)
    print(f"hinge_sgd  {n} samples x {d} features, {epochs} epochs, "
          f"nnz={X.nnz}")
    print(f"  {kernels.active_lane():>6}: {t_fast * 1e3:9.1f} ms")
    print(f"   numpy: {t_plain * 1e3:9.1f} ms   "
          f"(lane speedup x{t_plain / t_fast:.2f})")


if __name__ == "__main__":
    print(f"kernel lane: {kernels.active_lane()}")
    bench_grid_scores()
    bench_hinge_sgd()
