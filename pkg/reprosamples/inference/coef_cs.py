"""Confidence sets for regression coefficients that account for model uncertainty.

For a model tau and coefficients of interest Lambda, with A = Lambda & tau and
r = y - X_Lambda beta_Lambda, the nuclear statistic is

    [r^T O r / |A|] / [r^T (I - H_tau) r / (n - |tau|)]

where O projects onto (I - H_{tau \\ Lambda}) X_A. It is F(|A|, n - |tau|)
at the truth, so every per-model region is an ellipsoid in beta_A with the
coordinates of Lambda outside tau pinned to zero. Coefficient sets are unions
of these regions over candidate models.
"""

from typing import Iterable, List, Optional, Sequence, Tuple

from loguru import logger
import numpy as np

from reprosamples.core.distributions import f_quantile
from reprosamples.core.linalg import basis_of, least_squares, ortho_basis
from reprosamples.core.types import Dataset, ModelSupport
from reprosamples.inference.model_cs import check_level, model_confidence_set
from reprosamples.inference.regions import EllipsoidRegion, IntervalUnion, RegionUnion
from reprosamples.search.candidates import CandidateSet
from reprosamples.utils.constants import DEGENERATE_TOL
from reprosamples.utils.errors import DegenerateDenominator, DimensionMismatch, InvalidLevel


def normalize_lambda(lambda_set: Iterable[int], p: int) -> Tuple[int, ...]:
    values = tuple(sorted({int(j) for j in lambda_set}))
    if not values:
        raise DimensionMismatch("the coefficient subset is empty")
    if values[0] < 0 or values[-1] >= p:
        raise DimensionMismatch(f"coefficient indices must lie in [1, {p}]")
    return values


def nuclear_subset(
    y: np.ndarray,
    X: np.ndarray,
    lambda_set: Sequence[int],
    beta_lambda: np.ndarray,
    tau: ModelSupport,
) -> float:
    """
    Nuclear statistic of (beta_Lambda, tau)

    Returns:
        inf if a coordinate of Lambda outside tau is nonzero; 0 if Lambda and
        tau are disjoint and beta_Lambda = 0; the F ratio otherwise
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    lam = normalize_lambda(lambda_set, p)
    beta_lambda = np.asarray(beta_lambda, dtype=float).reshape(-1)
    if beta_lambda.shape[0] != len(lam):
        raise DimensionMismatch(f"expected {len(lam)} coefficients, got {beta_lambda.shape[0]}")
    tau.check(p, n)

    position = {j: k for k, j in enumerate(lam)}
    pinned = [j for j in lam if j not in tau]
    if any(beta_lambda[position[j]] != 0.0 for j in pinned):
        return float("inf")
    active = [j for j in lam if j in tau]
    if not active:
        return 0.0

    r = y - X[:, list(lam)] @ beta_lambda
    rest = ortho_basis(X, tau.difference(lam))
    Q_o, _ = basis_of(rest.residual(X[:, active]))
    numerator = float(np.sum((Q_o.T @ r) ** 2)) / len(active)

    resid = ortho_basis(X, tau).residual(r)
    rss = float(resid @ resid)
    if rss < DEGENERATE_TOL:
        raise DegenerateDenominator(f"residual sum of squares vanished for model {tau}")
    return numerator / (rss / (n - len(tau)))


def nuclear_joint(y: np.ndarray, X: np.ndarray, beta: np.ndarray, tau: ModelSupport) -> float:
    """Nuclear statistic for the full coefficient vector"""
    X = np.asarray(X, dtype=float)
    return nuclear_subset(y, X, range(X.shape[1]), beta, tau)


def subset_region(
    y: np.ndarray,
    X: np.ndarray,
    lambda_set: Sequence[int],
    tau: ModelSupport,
    alpha: float,
) -> Optional[EllipsoidRegion]:
    """
    Closed-form level-alpha region for beta_Lambda under model tau

    Returns:
        the ellipsoid, the point {0} when Lambda misses tau, or None when tau
        leaves no residual degrees of freedom
    """
    check_level(alpha)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    lam = normalize_lambda(lambda_set, p)
    if len(tau) >= n:
        logger.warning(f"Model {tau} has no residual degrees of freedom; dropped")
        return None

    active = tuple(j for j in lam if j in tau)
    pinned = tuple(j for j in lam if j not in tau)
    if not active:
        return EllipsoidRegion(tau, lam, (), np.zeros(0), np.zeros((0, 0)), 0.0, pinned)

    coef, _, rss = least_squares(X[:, list(tau)], y)
    where = {j: k for k, j in enumerate(tau)}
    center = coef[[where[j] for j in active]]

    Z = ortho_basis(X, tau.difference(lam)).residual(X[:, list(active)])
    shape = Z.T @ Z
    shape = (shape + shape.T) / 2.0

    sigma2 = rss / (n - len(tau))
    radius2 = len(active) * sigma2 * f_quantile(len(active), n - len(tau), alpha)
    return EllipsoidRegion(tau, lam, active, center, shape, float(radius2), pinned)


def subset_conf_region(
    y: np.ndarray,
    X: np.ndarray,
    lambda_set: Sequence[int],
    candidates: CandidateSet,
    alpha: float,
) -> RegionUnion:
    """Union of the per-model regions over the candidate set"""
    X = np.asarray(X, dtype=float)
    lam = normalize_lambda(lambda_set, X.shape[1])
    regions: List[EllipsoidRegion] = []
    for tau in candidates:
        region = subset_region(y, X, lam, tau, alpha)
        if region is not None:
            regions.append(region)
    return RegionUnion(regions=regions, alpha=alpha, lambda_set=lam)


def single_coef_ci(y: np.ndarray, X: np.ndarray, i: int, candidates: CandidateSet, alpha: float) -> IntervalUnion:
    """
    Confidence set for one coefficient (index 0-based)

    Models containing i give t intervals; models without i contribute the point 0.
    """
    check_level(alpha)
    X = np.asarray(X, dtype=float)
    normalize_lambda([i], X.shape[1])
    pieces: List[Tuple[float, float]] = []
    zero_atom = False
    for tau in candidates:
        if i not in tau:
            zero_atom = True
            continue
        region = subset_region(y, X, [i], tau, alpha)
        if region is None:
            continue
        if region.shape[0, 0] <= DEGENERATE_TOL * float(X[:, i] @ X[:, i]):
            logger.warning(f"Coefficient {i + 1} is not identified in model {tau}; model skipped")
            continue
        center = float(region.center[0])
        half = float(np.sqrt(region.radius2 / region.shape[0, 0]))
        pieces.append((center - half, center + half))
    return IntervalUnion.from_pieces(pieces, zero_atom)


def joint_conf_set(y: np.ndarray, X: np.ndarray, candidates: CandidateSet, alpha: float) -> RegionUnion:
    """Union over candidate models of ellipsoids in beta_tau with every other coordinate pinned to zero"""
    X = np.asarray(X, dtype=float)
    return subset_conf_region(y, X, range(X.shape[1]), candidates, alpha)


def check_split_levels(alpha1: float, alpha2: float) -> float:
    for name, value in (("alpha1", alpha1), ("alpha2", alpha2)):
        if not 0.5 < value < 1.0:
            raise InvalidLevel(f"{name} must lie in (1/2, 1), got {value}")
    return alpha1 + alpha2 - 1.0


def confident_candidates(
    data: Dataset,
    candidates: CandidateSet,
    alpha1: float,
    J: int,
    seed: int,
    threads: int = 1,
) -> CandidateSet:
    """Candidates kept by the level-alpha1 model confidence set"""
    mcs = model_confidence_set(data, candidates, alpha1, J, seed, threads=threads)
    kept = candidates.restrict(mcs.models)
    logger.info(f"Model confidence set at {alpha1} keeps {len(kept)} of {len(candidates)} candidates")
    return kept


def modified_conf_set(
    data: Dataset,
    candidates: CandidateSet,
    alpha1: float,
    alpha2: float,
    J: int,
    seed: int,
    lambda_set: Sequence[int],
    threads: int = 1,
) -> RegionUnion:
    """
    Union of level-alpha2 regions over the level-alpha1 model confidence set

    The union has level alpha1 + alpha2 - 1.
    """
    alpha = check_split_levels(alpha1, alpha2)
    kept = confident_candidates(data, candidates, alpha1, J, seed, threads)
    union = subset_conf_region(data.y, data.X, lambda_set, kept, alpha2)
    union.alpha = alpha
    return union
