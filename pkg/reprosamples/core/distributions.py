"""F distribution through the regularized incomplete beta function."""

import numpy as np
import scipy.special as sc

from reprosamples.utils.errors import InvalidLevel, ReproError


def _check_dof(d1: int, d2: int) -> None:
    if d1 < 1 or d2 < 1:
        raise ReproError(f"F degrees of freedom must be >= 1, got ({d1}, {d2})")


def f_cdf(d1: int, d2: int, q: float) -> float:
    """P(F_{d1,d2} <= q) = I_{d1 q / (d1 q + d2)}(d1/2, d2/2)"""
    _check_dof(d1, d2)
    if q <= 0:
        return 0.0
    if np.isinf(q):
        return 1.0
    x = d1 * q / (d1 * q + d2)
    return float(sc.betainc(d1 / 2.0, d2 / 2.0, x))


def f_quantile(d1: int, d2: int, level: float) -> float:
    """
    Inverse of ``f_cdf`` in its last argument

    Args:
        d1: numerator degrees of freedom
        d2: denominator degrees of freedom
        level: probability in (0, 1)

    Returns:
        q with f_cdf(d1, d2, q) == level
    """
    _check_dof(d1, d2)
    if not 0.0 < level < 1.0:
        raise InvalidLevel(f"level must lie in (0, 1), got {level}")
    x = float(sc.betaincinv(d1 / 2.0, d2 / 2.0, level))
    if x >= 1.0:
        return float("inf")
    return d2 * x / (d1 * (1.0 - x))
