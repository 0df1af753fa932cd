"""Projection and least-squares kernels.

Projections are always applied through a thin orthonormal factor ``Q`` of the
column span, never as an explicit n x n matrix.
"""

from typing import Optional, Sequence, Tuple, Union

from loguru import logger
import numpy as np
import scipy.linalg as sla

from reprosamples.core.types import ModelSupport, OrthoBasis
from reprosamples.utils.constants import RANK_TOL
from reprosamples.utils.errors import DimensionMismatch, EmptySupport, ZeroVector


def _columns(X: np.ndarray, support: Union[ModelSupport, Sequence[int], None]) -> Tuple[np.ndarray, Tuple[int, ...]]:
    if support is None:
        return X, tuple(range(X.shape[1]))
    cols = tuple(support)
    if cols and max(cols) >= X.shape[1]:
        raise DimensionMismatch(f"column {max(cols) + 1} requested from a matrix with {X.shape[1]} columns")
    return X[:, list(cols)], cols


def basis_of(M: np.ndarray, tol: float = RANK_TOL) -> Tuple[np.ndarray, int]:
    """Orthonormal basis of the column span of ``M`` via a thin SVD"""
    n, k = M.shape
    if k == 0:
        return np.zeros((n, 0)), 0
    U, s, _ = sla.svd(M, full_matrices=False, lapack_driver="gesdd")
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((n, 0)), 0
    keep = s > tol * s[0]
    return U[:, keep], int(keep.sum())


def ortho_basis(
    X: np.ndarray,
    support: Union[ModelSupport, Sequence[int], None],
    require_rank: bool = False,
) -> OrthoBasis:
    """
    Build the orthonormal factor of span(X[:, support])

    Args:
        X: n x p design
        support: columns to span (``None`` for all columns)
        require_rank: raise EmptySupport when the span is trivial

    Returns:
        OrthoBasis whose rank is the numerical rank of the selected columns
    """
    X = np.asarray(X, dtype=float)
    M, cols = _columns(X, support)
    Q, rank = basis_of(M)
    if rank == 0 and require_rank:
        raise EmptySupport("selected columns span only the zero vector")

    rank_deficient = rank < len(cols)
    if rank_deficient and rank > 0:
        logger.warning(f"Columns {[c + 1 for c in cols]} are rank deficient (rank {rank} < {len(cols)})")

    model = support if isinstance(support, ModelSupport) else None
    return OrthoBasis(Q=Q, rank=rank, support=model, rank_deficient=rank_deficient, columns=cols)


def project(basis: OrthoBasis, v: np.ndarray) -> np.ndarray:
    """Apply H = Q Q^T to ``v``"""
    v = np.asarray(v, dtype=float)
    if v.shape[0] != basis.n:
        raise DimensionMismatch(f"vector of length {v.shape[0]} projected onto a basis in R^{basis.n}")
    return basis.project(v)


def residualize(basis: OrthoBasis, M: np.ndarray) -> np.ndarray:
    """(I - H) M for a vector or a matrix ``M``"""
    M = np.asarray(M, dtype=float)
    if M.shape[0] != basis.n:
        raise DimensionMismatch(f"operand with {M.shape[0]} rows residualized against a basis in R^{basis.n}")
    return basis.residual(M)


def least_squares(X_sub: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Minimum-norm least squares

    Returns:
        (coef, fitted, rss)
    """
    X_sub = np.asarray(X_sub, dtype=float)
    y = np.asarray(y, dtype=float)
    if X_sub.ndim == 1:
        X_sub = X_sub.reshape(-1, 1)
    if X_sub.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"design has {X_sub.shape[0]} rows but y has length {y.shape[0]}")

    if X_sub.shape[1] == 0:
        return np.zeros(0), np.zeros_like(y), float(y @ y)

    coef, _, _, _ = sla.lstsq(X_sub, y, cond=RANK_TOL, lapack_driver="gelsd")
    fitted = X_sub @ coef
    resid = y - fitted
    return coef, fitted, float(resid @ resid)


def rss_of(X: np.ndarray, y: np.ndarray, support: Union[ModelSupport, Sequence[int]], extra: Optional[np.ndarray] = None) -> float:
    """Residual sum of squares of y on X[:, support], optionally with one extra column"""
    M = X[:, list(support)]
    if extra is not None:
        M = np.column_stack([M, extra])
    return least_squares(M, y)[2]


def cosine_sim_sq(v1: np.ndarray, v2: np.ndarray) -> float:
    """Squared cosine of the angle between two vectors"""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    if v1.shape != v2.shape:
        raise DimensionMismatch(f"vectors of shape {v1.shape} and {v2.shape}")
    n1 = float(v1 @ v1)
    n2 = float(v2 @ v2)
    if n1 == 0.0 or n2 == 0.0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    value = float(v1 @ v2) ** 2 / (n1 * n2)
    return min(max(value, 0.0), 1.0)
