# reprosamples/search/ebic.py
from typing import List, Optional, Tuple

import numpy as np

from reprosamples.core.types import ModelSupport
from reprosamples.criterion.information import ExtendedBicCriterion
from reprosamples.search.lasso import LassoPath


def ebic_window(
    path: LassoPath,
    y: np.ndarray,
    X: np.ndarray,
    unpenalized: Optional[np.ndarray] = None,
    zeta_endpoints: Tuple[float, float] = (0.0, 1.0),
    max_support: Optional[int] = None,
) -> List[ModelSupport]:
    """
    Supports of every lambda between the extended-BIC minimizers at the two zeta endpoints

    Each support is refit by least squares, together with the repro column when
    one is given, and scored by
    ``n log(RSS / n) + |tau| log n + 2 zeta log C(p, |tau|)``.

    Args:
        path: adaptive lasso path of (y, X[, u*])
        y: response
        X: design
        unpenalized: the repro column u* used for the path
        zeta_endpoints: the two zeta values bounding the window
        max_support: supports larger than this never enter the window

    Returns:
        deduplicated supports, in path order
    """
    if len(path) == 0:
        return []

    lo_zeta, hi_zeta = zeta_endpoints
    kwargs = {"extra": unpenalized, "max_support": max_support}
    low = ExtendedBicCriterion(lo_zeta).scores(path, y, X, **kwargs)
    high = ExtendedBicCriterion(hi_zeta).scores(path, y, X, **kwargs)
    if np.all(np.isinf(low) & (low > 0)):
        return []

    i0, i1 = int(np.argmin(low)), int(np.argmin(high))
    start, stop = min(i0, i1), max(i0, i1)

    supports = path.supports
    window: List[ModelSupport] = []
    for k in range(start, stop + 1):
        support = supports[k]
        if max_support is not None and len(support) > max_support:
            continue
        if support not in window:
            window.append(support)
    return window
