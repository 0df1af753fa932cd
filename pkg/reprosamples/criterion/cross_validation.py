# reprosamples/criterion/cross_validation.py
from typing import Any

from loguru import logger
import numpy as np

from reprosamples.core.linalg import least_squares
from reprosamples.core.rng import Stream
from reprosamples.criterion.base import SelectionCriterion
from reprosamples.search.lasso import LassoPath, adaptive_lasso_path
from reprosamples.utils.errors import ReproError


class CrossValidationCriterion(SelectionCriterion):
    """K-fold prediction error of the least-squares refit on each path support"""

    name = "cv"

    def __init__(self, folds: int = 5):
        self.folds = folds

    def select(self, path: LassoPath, y: np.ndarray, X: np.ndarray, **kwargs: Any) -> int:
        """
        Args:
            path: path fitted on the full data; its lambda grid is reused per fold
            y: full response
            X: full design
            **kwargs: ``stream`` for the fold shuffle, ``max_support`` to skip large supports
        """
        n = X.shape[0]
        stream = kwargs.get("stream") or Stream(0)
        max_support = kwargs.get("max_support")
        order = stream.generator().permutation(n)
        fold_of = np.empty(n, dtype=int)
        fold_of[order] = np.arange(n) % self.folds

        errors = np.zeros(len(path))
        for fold in range(self.folds):
            test = fold_of == fold
            train = ~test
            try:
                fold_path = adaptive_lasso_path(y[train], X[train], lambda_grid=path.lambdas)
            except ReproError as e:
                logger.debug(f"CV fold {fold} skipped: {e}")
                errors += np.inf
                continue
            for k, support in enumerate(fold_path.supports):
                if max_support is not None and len(support) > max_support:
                    errors[k] = np.inf
                    continue
                cols = list(support)
                coef, _, _ = least_squares(X[train][:, cols], y[train])
                resid = y[test] - X[test][:, cols] @ coef
                errors[k] += float(resid @ resid)

        return int(np.argmin(errors))
