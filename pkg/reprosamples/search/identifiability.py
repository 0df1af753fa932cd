"""Exhaustive subset enumeration: best subset, the repro objective, and C_min.

Residual sums of squares are computed for whole batches of subsets of equal
size at once from the Gram matrix,

    RSS(tau) = y^T y - c_tau^T pinv(G_tau) c_tau,   G = X^T X, c = X^T y,

so enumeration is only practical for small p or small subset sizes; every
entry point guards the number of subsets.
"""

from itertools import combinations, islice
from math import comb
from typing import Iterator, Optional, Tuple

import numpy as np

from reprosamples.core.types import ModelSupport
from reprosamples.search.lasso import remove_direction
from reprosamples.utils.constants import C_MIN_LIMIT, EXHAUSTIVE_LIMIT, RANK_TOL, RSS_TIE_TOL
from reprosamples.utils.errors import DimensionMismatch, TooLarge

CHUNK = 50_000


def subset_count(p: int, max_size: int) -> int:
    return sum(comb(p, j) for j in range(0, min(max_size, p) + 1))


def subset_rss(y: np.ndarray, X: np.ndarray, max_size: int) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
    """
    Yield (size, subsets, rss) batches for every subset of size 0..max_size

    ``subsets`` is an (m, size) integer array, ``rss`` the matching (m,) array.
    """
    n, p = X.shape
    if y.shape[0] != n:
        raise DimensionMismatch(f"y has length {y.shape[0]} but X has {n} rows")
    G = X.T @ X
    c = X.T @ y
    yy = float(y @ y)

    yield 0, np.zeros((1, 0), dtype=int), np.array([yy])
    for size in range(1, min(max_size, p) + 1):
        iterator = combinations(range(p), size)
        while True:
            block = np.array(list(islice(iterator, CHUNK)), dtype=int)
            if block.size == 0:
                break
            G_sub = G[block[:, :, None], block[:, None, :]]
            c_sub = c[block]
            fitted = np.einsum("mi,mij,mj->m", c_sub, np.linalg.pinv(G_sub, rcond=RANK_TOL), c_sub)
            yield size, block, np.maximum(yy - fitted, 0.0)


def best_subset(y: np.ndarray, X: np.ndarray, k: int, limit: int = EXHAUSTIVE_LIMIT) -> ModelSupport:
    """
    argmin of ||y - X_tau beta||^2 over |tau| <= k

    RSS values within a relative ``1e-9 * ||y||^2`` of the minimum count as
    ties, which go to the smallest subset, then to the lexicographically first.
    """
    p = X.shape[1]
    k = min(k, p)
    if comb(p, k) > limit:
        raise TooLarge(f"C({p}, {k}) subsets exceed the enumeration limit {limit}")

    batches = [(size, subsets, rss) for size, subsets, rss in subset_rss(y, X, k)]
    best_rss = min(float(rss.min()) for _, _, rss in batches)
    threshold = best_rss + RSS_TIE_TOL * max(float(y @ y), 1e-300)
    for size, subsets, rss in batches:
        hits = np.flatnonzero(rss <= threshold)
        if hits.size:
            pick = hits[np.argmin(rss[hits])]
            return ModelSupport(tuple(subsets[pick].tolist()))
    return ModelSupport()


def penalized_repro_argmin(
    y: np.ndarray,
    X: np.ndarray,
    u: Optional[np.ndarray],
    lam: float,
    max_size: Optional[int] = None,
    limit: int = C_MIN_LIMIT,
) -> ModelSupport:
    """
    Exact argmin over tau of lam |tau| + min_{beta, sigma} ||y - X_tau beta - sigma u||^2

    Args:
        y: response
        X: design
        u: repro copy (or the realized error) entering unpenalized; None drops it
        lam: L0 penalty per active column
        max_size: largest subset considered, default min(p, n - 2)
        limit: guard on the number of subsets
    """
    n, p = X.shape
    max_size = min(p, n - 2) if max_size is None else min(max_size, p)
    if subset_count(p, max_size) > limit:
        raise TooLarge(f"{subset_count(p, max_size)} subsets exceed the enumeration limit {limit}")

    y_t, X_t = remove_direction(np.asarray(y, dtype=float), np.asarray(X, dtype=float), u)
    best_value, best = np.inf, ModelSupport()
    for size, subsets, rss in subset_rss(y_t, X_t, max_size):
        values = lam * size + rss
        pick = int(np.argmin(values))
        if values[pick] < best_value:
            best_value = float(values[pick])
            best = ModelSupport(tuple(subsets[pick].tolist()))
    return best


def c_min(X: np.ndarray, tau0: ModelSupport, beta0: np.ndarray, limit: int = C_MIN_LIMIT) -> float:
    """
    Separation of the true mean from every competing model no larger than tau0

    min over tau != tau0, |tau| <= |tau0| of
    ||(I - H_tau) X_tau0 beta0||^2 / (n * max(|tau0 \\ tau|, 1)).
    """
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    beta0 = np.asarray(beta0, dtype=float).reshape(-1)
    if beta0.shape[0] != len(tau0):
        raise DimensionMismatch(f"beta0 has {beta0.shape[0]} entries for a support of size {len(tau0)}")
    tau0.check(p)
    if comb(p, len(tau0)) > limit:
        raise TooLarge(f"C({p}, {len(tau0)}) competing models exceed the enumeration limit {limit}")

    mu = X[:, list(tau0)] @ beta0
    truth = np.array(tau0.indices, dtype=int)
    best = np.inf
    for size, subsets, rss in subset_rss(mu, X, len(tau0)):
        missing = len(tau0) - np.isin(subsets, truth).sum(axis=1)
        same = (missing == 0) & (size == len(tau0))
        scaled = rss / (n * np.maximum(missing, 1))
        scaled[same] = np.inf
        if scaled.size:
            best = min(best, float(scaled.min()))
    return float(best)
