# reprosamples/criterion/base.py
import abc
from typing import Any, Dict, Optional

import numpy as np

from reprosamples.core.linalg import rss_of
from reprosamples.core.types import ModelSupport
from reprosamples.search.lasso import LassoPath


def path_rss(
    path: LassoPath,
    y: np.ndarray,
    X: np.ndarray,
    extra: Optional[np.ndarray] = None,
    max_support: Optional[int] = None,
) -> np.ndarray:
    """Least-squares refit RSS of every path support; NaN where the support is too large"""
    cache: Dict[ModelSupport, float] = {}
    out = np.full(len(path), np.nan)
    for k, support in enumerate(path.supports):
        if max_support is not None and len(support) > max_support:
            continue
        if support not in cache:
            cache[support] = rss_of(X, y, support, extra=extra)
        out[k] = cache[support]
    return out


class SelectionCriterion(abc.ABC):
    """Base abstract class for rules that pick one lambda on a solution path"""

    name: str = "criterion"

    @abc.abstractmethod
    def select(self, path: LassoPath, y: np.ndarray, X: np.ndarray, **kwargs: Any) -> int:
        """
        Pick a lambda on the path

        Args:
            path: the solution path
            y: response the path was fitted to
            X: design the path was fitted to
            **kwargs: criterion specific context (``extra``, ``max_support``, ``stream``)

        Returns:
            index into the path
        """
        pass


class InformationCriterion(SelectionCriterion):
    """n log(RSS / n) + penalty(|tau|), minimized over the path"""

    @abc.abstractmethod
    def penalty(self, size: int, n: int, p: int) -> float:
        pass

    def scores(self, path: LassoPath, y: np.ndarray, X: np.ndarray, **kwargs: Any) -> np.ndarray:
        n, p = X.shape
        rss = path_rss(path, y, X, extra=kwargs.get("extra"), max_support=kwargs.get("max_support"))
        floor = 1e-20 * max(float(y @ y), 1.0)
        scores = np.full(len(path), np.inf)
        for k, support in enumerate(path.supports):
            if np.isnan(rss[k]):
                continue
            fit = -np.inf if rss[k] <= floor else n * np.log(rss[k] / n)
            scores[k] = fit + self.penalty(len(support), n, p)
        return scores

    def select(self, path: LassoPath, y: np.ndarray, X: np.ndarray, **kwargs: Any) -> int:
        return int(np.argmin(self.scores(path, y, X, **kwargs)))
