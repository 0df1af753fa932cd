# reprosamples/inference/transform.py
from dataclasses import dataclass
from typing import List, Optional, Tuple

from loguru import logger
import numpy as np
import scipy.linalg as sla

from reprosamples.core.types import Dataset
from reprosamples.inference.coef_cs import subset_conf_region
from reprosamples.inference.regions import RegionUnion
from reprosamples.search.candidates import CandidateSet, SearchConfig, search_candidates
from reprosamples.utils.errors import DimensionMismatch, SingularTransform

MAX_CONDITION = 1e8


@dataclass
class TransformResult:
    region: RegionUnion
    L_tilde: np.ndarray
    completion: List[int]
    candidates: CandidateSet


def complete_transform(L: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """
    Stack L over unit rows e_j so the square result is invertible

    The unit rows are the coordinates left out by a column-pivoted QR of L, so
    L = I[:l] completes to the identity.
    """
    L = np.atleast_2d(np.asarray(L, dtype=float))
    l, p = L.shape
    if l > p:
        raise DimensionMismatch(f"L has {l} rows but only {p} coefficients")
    _, _, pivots = sla.qr(L, mode="economic", pivoting=True)
    completion = sorted(set(range(p)) - set(int(j) for j in pivots[:l]))
    L_tilde = np.vstack([L, np.eye(p)[completion]])

    condition = np.linalg.cond(L_tilde)
    if not np.isfinite(condition) or condition >= MAX_CONDITION:
        raise SingularTransform(f"completed transform has condition number {condition:.3g}")
    return L_tilde, completion


def linear_transform_inference(
    L: np.ndarray,
    data: Dataset,
    config: SearchConfig,
    alpha: float,
    candidates: Optional[CandidateSet] = None,
    threads: int = 1,
) -> TransformResult:
    """
    Confidence set for L beta through the reparametrization X~ = X L~^{-1}

    The candidate search runs on the transformed data unless ``candidates``
    (already in transformed coordinates) is supplied.
    """
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if L.shape[1] != data.p:
        raise DimensionMismatch(f"L has {L.shape[1]} columns but the design has p={data.p}")
    L_tilde, completion = complete_transform(L)
    l = L.shape[0]
    X_tilde = sla.solve(L_tilde.T, data.X.T).T
    transformed = Dataset(y=data.y, X=X_tilde)

    if candidates is None:
        logger.info("Searching candidates on the transformed design")
        candidates = search_candidates(transformed, config, threads=threads)
    region = subset_conf_region(transformed.y, transformed.X, range(l), candidates, alpha)
    return TransformResult(region=region, L_tilde=L_tilde, completion=completion, candidates=candidates)
