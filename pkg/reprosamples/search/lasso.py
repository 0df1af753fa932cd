"""Adaptive LASSO solution path with an optional unpenalized repro column.

The objective at each lambda is

    1/2 ||y - X beta - sigma u||^2 + lambda * sum_j w_j |beta_j|

with sigma unpenalized. Sigma is eliminated exactly by projecting y and X onto
the orthogonal complement of u, after which the path is the plain weighted
lasso of the projected data. Weighted columns are handled by rescaling,
``Z_j = X_j / w_j``, and the coordinate-descent kernel is scikit-learn's.
"""

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple
import warnings

from loguru import logger
import numpy as np
import scipy.linalg as sla
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import lasso_path

from reprosamples.core.types import ModelSupport
from reprosamples.utils.errors import DimensionMismatch, InvalidConfig, NonConvergence

WEIGHT_EPS = 1e-4
RIDGE_SCALE = 1e-3
GAP_LIMIT = 1e-6


@dataclass(frozen=True)
class LassoPath:
    """Solutions of the adaptive lasso along a decreasing lambda grid"""

    lambdas: np.ndarray
    coefs: np.ndarray  # p x L, original (unweighted) scale
    weights: np.ndarray
    sigmas: Optional[np.ndarray] = None
    gaps: Optional[np.ndarray] = None

    @property
    def supports(self) -> List[ModelSupport]:
        return [ModelSupport(tuple(np.flatnonzero(self.coefs[:, k] != 0.0))) for k in range(len(self.lambdas))]

    def __len__(self) -> int:
        return len(self.lambdas)

    def __iter__(self) -> Iterator[Tuple[float, ModelSupport]]:
        return iter(zip(self.lambdas.tolist(), self.supports))


def remove_direction(y: np.ndarray, X: np.ndarray, u: Optional[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """Project y and the columns of X onto the orthogonal complement of u"""
    if u is None:
        return y, X
    norm = float(np.linalg.norm(u))
    if norm == 0.0:
        return y, X
    e = u / norm
    return y - e * (e @ y), X - np.outer(e, e @ X)


def adaptive_weights(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Adaptive lasso weights from a ridge pilot fit

    The pilot uses penalty ``1e-3 * tr(X^T X) / p`` and is solved in the
    n x n dual form when p > n.

    Returns:
        w_j = 1 / (|beta_ridge_j| + 1e-4)
    """
    n, p = X.shape
    kappa = RIDGE_SCALE * float(np.sum(X * X)) / max(p, 1)
    if kappa == 0.0:
        return np.full(p, 1.0 / WEIGHT_EPS)
    if p > n:
        alpha = sla.solve(X @ X.T + kappa * np.eye(n), y, assume_a="pos")
        pilot = X.T @ alpha
    else:
        pilot = sla.solve(X.T @ X + kappa * np.eye(p), X.T @ y, assume_a="pos")
    return 1.0 / (np.abs(pilot) + WEIGHT_EPS)


def lambda_grid_for(Z: np.ndarray, y: np.ndarray, n_lambda: int = 100, min_ratio: float = 1e-3) -> np.ndarray:
    """Log-spaced grid from lambda_max = max |Z^T y| down to ``min_ratio * lambda_max``"""
    lam_max = float(np.max(np.abs(Z.T @ y))) if Z.shape[1] else 0.0
    if lam_max == 0.0:
        return np.array([1.0])
    return np.geomspace(lam_max, lam_max * min_ratio, n_lambda)


def _polish(Z: np.ndarray, y: np.ndarray, gamma: np.ndarray, lam: float) -> np.ndarray:
    """Solve the stationarity equations on the active set; keep the result if KKT holds"""
    active = np.flatnonzero(gamma)
    if active.size == 0 or active.size >= Z.shape[0]:
        return gamma
    Za = Z[:, active]
    signs = np.sign(gamma[active])
    try:
        refined = sla.solve(Za.T @ Za, Za.T @ y - lam * signs, assume_a="sym")
    except (sla.LinAlgError, ValueError):
        return gamma
    if np.any(np.sign(refined) != signs):
        return gamma
    candidate = np.zeros_like(gamma)
    candidate[active] = refined
    grad = Z.T @ (y - Z @ candidate)
    inactive = np.setdiff1d(np.arange(Z.shape[1]), active)
    if inactive.size and np.max(np.abs(grad[inactive])) > lam * (1.0 + 1e-9):
        return gamma
    return candidate


def adaptive_lasso_path(
    y: np.ndarray,
    X: np.ndarray,
    unpenalized: Optional[np.ndarray] = None,
    lambda_grid: Optional[Sequence[float]] = None,
    n_lambda: int = 100,
    lambda_min_ratio: float = 1e-3,
    max_iter: int = 10000,
    tol: float = 1e-10,
    weights: Optional[np.ndarray] = None,
) -> LassoPath:
    """
    Solve the adaptive lasso along a lambda grid

    Args:
        y: response of length n
        X: n x p design
        unpenalized: optional repro column u*, always active and never penalized
        lambda_grid: strictly decreasing positive grid; automatic when None
        n_lambda: size of the automatic grid
        lambda_min_ratio: smallest automatic lambda relative to lambda_max
        max_iter: coordinate-descent sweeps per lambda
        tol: duality-gap tolerance passed to the solver
        weights: adaptive weights; computed from a ridge pilot when None

    Returns:
        LassoPath over the grid
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    if y.shape[0] != n:
        raise DimensionMismatch(f"y has length {y.shape[0]} but X has {n} rows")
    if unpenalized is not None and np.asarray(unpenalized).shape[0] != n:
        raise DimensionMismatch("unpenalized column must have length n")

    y_t, X_t = remove_direction(y, X, unpenalized)
    w = adaptive_weights(X_t, y_t) if weights is None else np.asarray(weights, dtype=float)
    if w.shape[0] != p or np.any(w <= 0):
        raise InvalidConfig("adaptive weights must be positive, one per column")
    Z = X_t / w

    if lambda_grid is None:
        grid = lambda_grid_for(Z, y_t, n_lambda, lambda_min_ratio)
    else:
        grid = np.asarray(lambda_grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) >= 0):
            raise InvalidConfig("lambda grid must be positive and strictly decreasing")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        _, gammas, gaps = lasso_path(Z, y_t, alphas=grid / n, max_iter=max_iter, tol=tol)

    # duality gaps relative to ||y||^2
    relative = np.asarray(gaps, dtype=float) / max(float(y_t @ y_t), 1e-300)
    worst = int(np.argmax(relative))
    if relative[worst] > GAP_LIMIT:
        raise NonConvergence(float(grid[worst]), float(gaps[worst]))

    gammas = np.array(gammas, dtype=float)
    for k, lam in enumerate(grid):
        gammas[:, k] = _polish(Z, y_t, gammas[:, k], float(lam))

    coefs = gammas / w[:, None]
    sigmas = None
    if unpenalized is not None:
        u = np.asarray(unpenalized, dtype=float)
        uu = float(u @ u)
        if uu > 0:
            sigmas = (u @ (y[:, None] - X @ coefs)) / uu

    logger.debug(f"Adaptive lasso path: {len(grid)} lambdas, largest support {int((coefs != 0).sum(axis=0).max())}")
    return LassoPath(lambdas=grid, coefs=coefs, weights=w, sigmas=sigmas, gaps=np.asarray(gaps))


def kkt_violation(path: LassoPath, y: np.ndarray, X: np.ndarray, unpenalized: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Largest KKT violation per lambda, relative to lambda

    For active j: |X_j^T r - lambda w_j sign(beta_j)|; for inactive j:
    max(|X_j^T r| - lambda w_j, 0); both measured in the weighted scale.
    """
    y_t, X_t = remove_direction(np.asarray(y, dtype=float), np.asarray(X, dtype=float), unpenalized)
    Z = X_t / path.weights
    violations = np.zeros(len(path))
    for k, lam in enumerate(path.lambdas):
        gamma = path.coefs[:, k] * path.weights
        grad = Z.T @ (y_t - Z @ gamma)
        active = gamma != 0
        v_active = np.abs(grad[active] - lam * np.sign(gamma[active]))
        v_inactive = np.maximum(np.abs(grad[~active]) - lam, 0.0)
        worst = max(v_active.max(initial=0.0), v_inactive.max(initial=0.0))
        violations[k] = worst / lam
    return violations
